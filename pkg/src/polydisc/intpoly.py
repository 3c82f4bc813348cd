"""Dense integer polynomial arithmetic on coefficient lists.

Coefficients are stored low degree first: ``[a0, a1, ..., an]``.  All
routines are exact over Python integers and never round.
"""
from math import gcd
from functools import reduce


def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p):
    return len(p) - 1 if p else -1


def derivative(p):
    return [k * p[k] for k in range(1, len(p))]


def content(p):
    return reduce(gcd, p, 0)


def primitive(p):
    """Primitive part with a positive leading coefficient."""
    c = content(p)
    if c == 0:
        return []
    if p[-1] < 0:
        c = -c
    return [a // c for a in p]


def prem(a, b):
    """Pseudo-remainder ``lc(b)**(deg a - deg b + 1) * a mod b``."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    if e <= 0:
        return trim(a)
    for _ in range(e):
        if len(a) - 1 < db:
            a = [lb * c for c in a]
            continue
        top = a[-1]
        shift = len(a) - 1 - db
        a = [lb * c for c in a]
        for i in range(db + 1):
            a[shift + i] -= top * b[i]
        a.pop()
    return trim(a)


def divexact(a, b):
    """Quotient of ``a`` by ``b`` assuming ``b`` divides ``a`` in Z[x]."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c, r = divmod(a[k], lb)
        if r:
            raise ArithmeticError("inexact polynomial division")
        q[k - db] = c
        if c:
            for i in range(db + 1):
                a[k - db + i] -= c * b[i]
    if any(a[:db]):
        raise ArithmeticError("inexact polynomial division")
    return q


def gcd_poly(a, b):
    """Primitive gcd of two integer polynomials (positive leading coefficient)."""
    a, b = trim(a), trim(b)
    if not a:
        return primitive(b)
    if not b:
        return primitive(a)
    a, b = primitive(a), primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = prem(a, b)
        a, b = b, primitive(r) if r else []
    return primitive(a) if len(a) > 1 else [1]


def squarefree_decomposition(p):
    """Yun's algorithm: list of ``(factor, multiplicity)`` with factors primitive.

    The product of ``factor**multiplicity`` equals ``p`` up to a constant.
    """
    f = primitive(trim(p))
    if len(f) <= 1:
        return []
    df = derivative(f)
    g = gcd_poly(f, df)
    b = divexact(f, g)
    c = divexact(df, g)
    d = [x - y for x, y in _pad(c, derivative(b))]
    out = []
    i = 1
    while len(b) > 1:
        a = gcd_poly(b, d)
        if len(a) > 1:
            out.append((a, i))
        b = divexact(b, a)
        c = divexact(d, a)
        d = trim(x - y for x, y in _pad(c, derivative(b)))
        i += 1
    return out


def _pad(u, v):
    n = max(len(u), len(v))
    return zip(list(u) + [0] * (n - len(u)), list(v) + [0] * (n - len(v)))


def sign(x):
    return (x > 0) - (x < 0)


def count_distinct_real_roots(p):
    """Number of distinct real roots of ``p`` from an exact Sturm chain.

    The chain is carried as primitive integer polynomials; each pseudo
    remainder is rescaled by a positive factor so only signs are tracked.
    """
    p = trim(p)
    if len(p) <= 1:
        return 0
    chain = [primitive(p), primitive(derivative(p))]
    while True:
        a, b = chain[-2], chain[-1]
        if len(b) <= 1:
            break
        r = prem(a, b)
        if not r:
            break
        e = len(a) - len(b) + 1
        s = -1 if (b[-1] < 0 and e % 2 == 1) else 1
        r = [-s * c for c in r]
        g = content(r)
        chain.append([c // g for c in r])
    at_pos = [sign(q[-1]) for q in chain]
    at_neg = [sign(q[-1]) * (-1) ** (len(q) - 1) for q in chain]
    return _variations(at_neg) - _variations(at_pos)


def _variations(signs):
    v = 0
    last = 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            v += 1
        last = s
    return v


def mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out
