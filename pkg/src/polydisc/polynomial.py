"""Exact and floating-point primitives for integer polynomials.

Heights, discriminants (Sylvester determinant and subresultant remainder
sequence), numeric roots, root signatures and the root/coefficient maps.
Coefficient vectors are ordered low degree first, ``(a0, a1, ..., an)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import intpoly
from .errors import DegenerateInputError, NumericFailure, UnsupportedDegreeError


class HeightKind(str, enum.Enum):
    NAIVE = "naive"
    LENGTH = "length"
    MAHLER = "mahler"

    @classmethod
    def parse(cls, kind):
        if isinstance(kind, cls):
            return kind
        try:
            return cls(str(kind).lower())
        except ValueError:
            raise ValueError(f"unknown height kind {kind!r}; "
                             f"expected one of {[k.value for k in cls]}") from None


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial of exact degree ``len(coeffs) - 1``."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(int(a) for a in self.coeffs)
        if len(c) < 2:
            raise UnsupportedDegreeError("degree must be at least 1")
        if c[-1] == 0:
            raise DegenerateInputError("leading coefficient a_n must be nonzero")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __neg__(self):
        return IntPolynomial(tuple(-a for a in self.coeffs))

    def reflect(self):
        """``P(-x)``."""
        return IntPolynomial(tuple(a if k % 2 == 0 else -a
                                   for k, a in enumerate(self.coeffs)))

    def reversed(self):
        """``x**n P(1/x)``; requires ``a0 != 0``."""
        return IntPolynomial(self.coeffs[::-1])


PolyLike = Union[IntPolynomial, Sequence[int], Sequence[float], np.ndarray]


def _int_coeffs(p):
    if isinstance(p, IntPolynomial):
        return list(p.coeffs)
    c = [int(a) for a in p]
    if any(int(a) != a for a in p):
        raise ValueError("integer coefficients required")
    return c


# ---------------------------------------------------------------- heights

def height(p, kind=HeightKind.NAIVE):
    """Height of a coefficient vector.

    naive and length are exact integers for integer input; mahler is a float
    computed from numeric roots (relative error about 1e-10 or better).
    """
    kind = HeightKind.parse(kind)
    coeffs = list(p.coeffs) if isinstance(p, IntPolynomial) else list(p)
    if kind is HeightKind.NAIVE:
        return max(abs(a) for a in coeffs)
    if kind is HeightKind.LENGTH:
        return sum(abs(a) for a in coeffs)
    return mahler_measure(coeffs)


def mahler_measure(coeffs, tol=1e-13):
    coeffs = list(coeffs)
    if not any(coeffs):
        raise DegenerateInputError("Mahler measure of the zero vector")
    if coeffs[-1] == 0:
        raise DegenerateInputError("Mahler measure needs a_n != 0")
    if len(coeffs) == 1:
        return abs(float(coeffs[0]))
    roots = roots_numeric(coeffs, tol=tol)
    logm = math.log(abs(float(coeffs[-1]))) + sum(
        math.log(abs(z)) for z in roots if abs(z) > 1.0)
    return math.exp(logm)


def mahler_measure_mp(coeffs, dps=60):
    """Mahler measure at ``dps`` decimal digits (an ``mpmath.mpf``)."""
    import mpmath

    coeffs = [int(a) if float(a).is_integer() else a for a in coeffs]
    if coeffs[-1] == 0:
        raise DegenerateInputError("Mahler measure needs a_n != 0")
    if all(isinstance(a, int) for a in coeffs):
        # squarefree factors keep the root finder well conditioned
        parts = [(f, m) for f, m in intpoly.squarefree_decomposition(coeffs) if len(f) > 1]
    else:
        parts = [(coeffs, 1)]
    with mpmath.workdps(dps):
        acc = abs(mpmath.mpf(coeffs[-1]))
        for factor, mult in parts:
            try:
                roots = mpmath.polyroots([mpmath.mpf(a) for a in factor[::-1]],
                                         maxsteps=500, extraprec=3 * dps)
            except mpmath.libmp.NoConvergence as exc:
                raise NumericFailure(f"root finder did not converge: {exc}") from exc
            acc *= mpmath.fprod([max(mpmath.mpf(1), abs(z)) for z in roots]) ** mult
        return +acc


def mahler_separation_digits(coeffs, Q):
    """Decimal digits that separate M(P) from the integer Q unless they are equal.

    a_n times a product of roots is an algebraic integer of degree at most
    2^n whose conjugates are bounded by the l2 norm B, so a nonzero
    M(P) - Q has modulus at least (B + Q)^(1 - 2^n).
    """
    n = len(coeffs) - 1
    b = math.sqrt(sum(float(a) * float(a) for a in coeffs)) + abs(Q) + 1
    return int(math.ceil((2 ** n - 1) * math.log10(b))) + 1


def mahler_compare(coeffs, Q):
    """Exact sign of M(P) - Q for integer coefficients and an integer bound Q."""
    coeffs = [int(a) for a in coeffs]
    Q = int(Q)
    import mpmath

    z = np.roots(coeffs[::-1])
    clustered = len(z) > 1 and np.min(np.abs(z[:, None] - z[None, :])
                                       + np.eye(len(z)) * 1e9) < 1e-4
    if not clustered:
        m = abs(coeffs[-1]) * float(np.prod(np.maximum(1.0, np.abs(z))))
        if abs(m - Q) > 1e-6 * max(Q, 1):
            return 1 if m > Q else -1
    digits = mahler_separation_digits(coeffs, Q)
    with mpmath.workdps(digits + 20):
        gap = mahler_measure_mp(coeffs, dps=digits + 20) - Q
        if abs(gap) < mpmath.mpf(10) ** (-digits):
            return 0
    return 1 if gap > 0 else -1


# ---------------------------------------------------------- discriminants

def sylvester_matrix(p, q):
    """Sylvester matrix of ``p`` (degree m) and ``q`` (degree k), size m+k."""
    m, k = len(p) - 1, len(q) - 1
    size = m + k
    rows = []
    for i in range(k):
        row = [0] * size
        for j, c in enumerate(reversed(p)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [0] * size
        for j, c in enumerate(reversed(q)):
            row[i + j] = c
        rows.append(row)
    return rows


def bareiss_det(matrix):
    """Determinant of a square integer matrix by fraction-free elimination."""
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sgn = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sgn = -sgn
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sgn * a[n - 1][n - 1]


def _check_degree(c):
    n = len(c) - 1
    if n < 2:
        raise UnsupportedDegreeError(f"discriminant needs degree >= 2, got {n}")
    if c[-1] == 0:
        raise DegenerateInputError("leading coefficient a_n must be nonzero")
    return n


def discriminant_det(p):
    """Discriminant from the (2n-1)x(2n-1) Sylvester determinant of P and P'.

    ``det Syl(P, P') = a_n * det M`` where ``M`` has its first column divided
    by ``a_n``; the sign factor ``(-1)**(n(n-1)/2)`` is applied afterwards.
    """
    c = _int_coeffs(p)
    n = _check_degree(c)
    res = bareiss_det(sylvester_matrix(c, intpoly.derivative(c)))
    q, r = divmod(res, c[-1])
    assert r == 0
    return -q if (n * (n - 1) // 2) % 2 else q


def resultant(a, b):
    """Resultant of two integer polynomials via the subresultant PRS.

    Follows the classical subresultant algorithm (Collins/Brown); every
    division is exact.
    """
    a, b = intpoly.trim(a), intpoly.trim(b)
    if not a or not b:
        return 0
    s = 1
    if len(a) < len(b):
        a, b = b, a
        if (len(a) - 1) % 2 == 1 and (len(b) - 1) % 2 == 1:
            s = -1
    if len(b) == 1:
        return s * b[0] ** (len(a) - 1)
    g = h = 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 == 1 and db % 2 == 1:
            s = -s
        r = intpoly.prem(a, b)
        a = b
        denom = g * h ** delta
        b = [x // denom for x in r]
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = g ** delta // h ** (delta - 1)
        if not b:
            return 0
        if len(b) == 1:
            da = len(a) - 1
            if da == 0:
                return s
            return s * (b[0] ** da // h ** (da - 1)) if da > 1 else s * b[0]
    # unreachable


def discriminant_prs(p):
    """Discriminant via ``Res(P, P') = (-1)**(n(n-1)/2) a_n D(P)``."""
    c = _int_coeffs(p)
    n = _check_degree(c)
    res = resultant(c, intpoly.derivative(c))
    q, r = divmod(res, c[-1])
    assert r == 0
    return -q if (n * (n - 1) // 2) % 2 else q


def discriminant_from_roots(lead, roots):
    """``a_n**(2n-2) * prod (z_i - z_j)**2`` evaluated in complex floating point."""
    z = np.asarray(roots, dtype=complex)
    n = len(z)
    val = complex(lead) ** (2 * n - 2)
    for i in range(n):
        for j in range(i + 1, n):
            val *= (z[i] - z[j]) ** 2
    return val


# ------------------------------------------------------------------ roots

def coeffs_from_roots(b, roots):
    """Coefficients (low first) of ``b * prod (x - z_j)``."""
    if b == 0:
        raise DegenerateInputError("b must be nonzero")
    roots = np.asarray(roots)
    dtype = np.result_type(roots.dtype, float)
    out = np.zeros(len(roots) + 1, dtype=dtype)
    out[0] = 1.0
    for k, z in enumerate(roots, start=1):
        # multiply by (x - z)
        out[1:k + 1] = out[0:k] - z * out[1:k + 1]
        out[0] = -z * out[0]
    return b * out


def _aberth(c, maxiter=500):
    """Simultaneous Aberth-Ehrlich iteration on coefficients ``c`` (low first)."""
    n = len(c) - 1
    mon = c / c[-1]
    radius = 1.0 + np.max(np.abs(mon[:-1]))
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    pc = mon[::-1]
    dpc = np.polyder(pc)
    for _ in range(maxiter):
        pz = np.polyval(pc, z)
        dpz = np.polyval(dpc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pz / dpz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            corr = ratio / (1.0 - ratio * inv.sum(axis=1))
        corr = np.where(pz == 0, 0.0, corr)
        if not np.all(np.isfinite(corr)):
            return None
        z = z - corr
        if np.all(np.abs(corr) <= 4e-16 * np.maximum(np.abs(z), 1.0)):
            break
    return z


def backward_error(coeffs, roots):
    c = np.asarray(coeffs, dtype=complex)
    rec = coeffs_from_roots(c[-1], roots)
    return float(np.max(np.abs(rec - c)) / np.max(np.abs(c)))


def roots_numeric(p, tol=1e-10, maxiter=500):
    """All ``n`` complex roots with multiplicity.

    Aberth iteration in double precision; if the relative backward error
    exceeds ``tol`` the roots are recomputed with mpmath at extended
    precision.  Raises ``NumericFailure`` if neither meets ``tol``.
    """
    coeffs = list(p.coeffs) if isinstance(p, IntPolynomial) else list(p)
    if coeffs[-1] == 0:
        raise DegenerateInputError("leading coefficient a_n must be nonzero")
    c = np.asarray([complex(a) for a in coeffs])
    if len(c) == 2:
        return np.array([-c[0] / c[1]])
    z = _aberth(c, maxiter)
    if z is not None and backward_error(c, z) <= tol:
        return z
    return _roots_mp(coeffs, tol)


def _polyroots_mp(coeffs, dps):
    import mpmath

    with mpmath.workdps(dps):
        try:
            r = mpmath.polyroots([mpmath.mpmathify(a) for a in coeffs[::-1]],
                                 maxsteps=400, extraprec=4 * dps)
        except mpmath.libmp.NoConvergence as exc:
            raise NumericFailure(f"root finder did not converge: {exc}") from exc
    return [complex(x) for x in r]


def _roots_mp(coeffs, tol, dps=50):
    """Extended-precision roots; integer input is split into squarefree factors first."""
    if all(float(a).is_integer() for a in coeffs):
        z = []
        for factor, mult in intpoly.squarefree_decomposition([int(a) for a in coeffs]):
            if len(factor) > 1:
                z.extend(_polyroots_mp(factor, dps) * mult)
        z = np.array(z)
    else:
        z = np.array(_polyroots_mp(coeffs, dps))
    if backward_error(np.asarray(coeffs, dtype=complex), z) > tol:
        raise NumericFailure("backward error above tolerance after precision escalation")
    return z


# -------------------------------------------------------------- signature

def signature(p):
    """Number of complex-conjugate root pairs, counted with multiplicity.

    Squarefree decomposition over Z followed by exact Sturm counts of the
    real roots of every factor.
    """
    c = intpoly.trim(_int_coeffs(p))
    n = len(c) - 1
    if n < 1:
        raise UnsupportedDegreeError("signature needs degree >= 1")
    real = 0
    for factor, mult in intpoly.squarefree_decomposition(c):
        real += mult * intpoly.count_distinct_real_roots(factor)
    return (n - real) // 2


def jacobian_formula(b, z):
    """``|b|**n * prod_{i<j} |z_i - z_j|``."""
    if b == 0:
        raise DegenerateInputError("b must be nonzero")
    z = np.asarray(z, dtype=float)
    n = len(z)
    prod = abs(b) ** n
    for i in range(n):
        for j in range(i + 1, n):
            prod *= abs(z[i] - z[j])
    return float(prod)


def jacobian_fd(b, z, step=1e-2):
    """``|det|`` of the central finite-difference Jacobian of ``(b, z) -> a``.

    The coefficients are affine in each of b, z_1, ..., z_n separately, so
    central differences are exact for any step; a wide step keeps rounding
    error small.
    """
    x0 = np.concatenate([[b], np.asarray(z, dtype=float)])
    m = len(x0)
    jac = np.empty((m, m))
    for k in range(m):
        h = step * max(1.0, abs(x0[k]))
        xp, xm = x0.copy(), x0.copy()
        xp[k] += h
        xm[k] -= h
        jac[:, k] = (coeffs_from_roots(xp[0], xp[1:]) -
                     coeffs_from_roots(xm[0], xm[1:])) / (2 * h)
    return abs(float(np.linalg.det(jac)))


def has_repeated_root(p):
    c = _int_coeffs(p)
    return len(intpoly.gcd_poly(c, intpoly.derivative(c))) > 1
