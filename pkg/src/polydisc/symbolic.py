"""Monomial expansion of the generic discriminant, cached per degree."""
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def discriminant_monomials(n):
    """``(exponents, coefficients)`` with ``D(a) = sum_t c_t prod_k a_k**e_tk``.

    Exponents are an ``(T, n+1)`` int32 array indexed by coefficient power;
    coefficients are exact integers stored as float64 (|c| < 2**53 for n <= 8).
    """
    import sympy

    x = sympy.Symbol("x")
    a = sympy.symbols(f"a0:{n + 1}")
    disc = sympy.discriminant(sum(a[k] * x ** k for k in range(n + 1)), x)
    terms = sympy.Poly(disc, *a).terms()
    exps = np.array([t[0] for t in terms], dtype=np.int32)
    coefs = [int(t[1]) for t in terms]
    if max(abs(c) for c in coefs) >= 2 ** 53:
        raise OverflowError(f"discriminant coefficients for n={n} not exact in float64")
    return exps, np.array(coefs, dtype=np.float64)
