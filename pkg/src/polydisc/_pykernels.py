"""Pure-Python/numpy implementations of the compiled kernels.

Same signatures and results as :mod:`polydisc._kernels`; used when the
extension is not built, and as the reference in backend-equivalence tests.
"""
import itertools

import numpy as np

from . import intpoly
from .polynomial import discriminant_prs

UNIT = 2.0 ** -53
INT128_MAX = 2 ** 127 - 1


def disc_sig_int(coeffs):
    c = [int(a) for a in coeffs]
    n = len(c) - 1
    d = discriminant_prs(c)
    if d == 0:
        if n <= 3:
            return d, 0
        return None
    if n <= 3:
        return d, 1 if d < 0 else 0
    r = intpoly.count_distinct_real_roots(c)
    s = (n - r) // 2
    return d, s


def _weight(a, n, length_bound, reduced):
    if length_bound >= 0 and sum(abs(x) for x in a) > length_bound:
        return 0
    if not reduced:
        return 1
    for k in range(n - 1, -1, -2):
        if a[k]:
            return 4 if a[k] > 0 else 0
    return 2


def census_block(n, outer, bound, length_bound, reduced, thr_hi, thr_lo, hist, check_every):
    thresholds = [(int(h) << 64) + int(l) for h, l in zip(thr_hi, thr_lo)]
    m = len(thresholds)
    total = 0
    counter = 0
    fallbacks = []
    checks = []
    inner = [range(-int(b), int(b) + 1) for b in bound[:n - 1]]
    for an, an1 in np.asarray(outer).tolist():
        # a_0 varies fastest, matching the compiled odometer
        for rest in itertools.product(*reversed(inner)):
            a = list(reversed(rest)) + [an1, an]
            w = _weight(a, n, length_bound, reduced)
            if not w:
                continue
            total += w
            out = disc_sig_int(a)
            if out is None:
                fallbacks.append((tuple(a), w))
                continue
            d, s = out
            ad = abs(d)
            lo, hi = 0, m
            while lo < hi:
                mid = (lo + hi) // 2
                if ad <= thresholds[mid]:
                    hi = mid
                else:
                    lo = mid + 1
            hist[s, lo] += w
            counter += 1
            if check_every > 0 and counter % check_every == 1:
                checks.append((tuple(a), d))
    return total, fallbacks, checks


def _float_real_roots(p, guard):
    n = len(p) - 1
    a = list(p)
    b = [(i + 1) * p[i + 1] for i in range(n)]
    chain = [a, b]
    while len(b) > 1:
        r = list(a)
        mag = [abs(x) for x in a]
        db = len(b) - 1
        for k in range(len(a) - 1, db - 1, -1):
            q = r[k] / b[db]
            for i in range(db + 1):
                r[k - db + i] -= q * b[i]
                mag[k - db + i] += abs(q * b[i])
        dr = db - 1
        if abs(r[dr]) <= guard * mag[dr]:
            return None
        a, b = b, [-x for x in r[:dr + 1]]
        chain.append(b)
    pos = [1 if q[-1] > 0 else -1 for q in chain]
    neg = [s if (len(q) - 1) % 2 == 0 else -s for s, q in zip(pos, chain)]
    return intpoly._variations(neg) - intpoly._variations(pos)


def mc_block(n, pts, exps, coefs, deltas, hist, rel_guard):
    pts = np.asarray(pts)
    exps = np.asarray(exps)
    coefs = np.asarray(coefs)
    deltas = np.asarray(deltas)
    N = pts.shape[0]
    T = exps.shape[0]
    maxe = 2 * n - 2
    pw = np.empty((maxe + 1, N, n + 1))
    pw[0] = 1.0
    for e in range(1, maxe + 1):
        pw[e] = pw[e - 1] * pts
    D = np.zeros(N)
    S = np.zeros(N)
    for t in range(T):
        term = np.full(N, coefs[t])
        for k in range(n + 1):
            e = exps[t, k]
            if e:
                term = term * pw[e][:, k]
        D += term
        S += np.abs(term)
    err = 2.0 * (3 * n + 2 + T) * UNIT * S
    ad = np.abs(D)
    keep = ~(ad - err > deltas[-1] * (1.0 + rel_guard))
    escalate = []
    for idx in np.flatnonzero(keep):
        d, e_ = D[idx], err[idx]
        a_ = abs(d)
        esc = a_ <= e_ or pts[idx, n] == 0.0
        if not esc:
            band = np.maximum(e_, rel_guard * deltas)
            esc = bool(np.any(np.abs(a_ - deltas) <= band))
        if esc:
            escalate.append(int(idx))
            continue
        j = int(np.searchsorted(deltas, a_, side="left"))
        if j == len(deltas):
            continue
        if n <= 3:
            s = 1 if d < 0 else 0
        else:
            r = _float_real_roots(pts[idx].tolist(), rel_guard)
            if r is None:
                escalate.append(int(idx))
                continue
            s = (n - r) // 2
            if (s % 2 == 1) != (d < 0):
                escalate.append(int(idx))
                continue
        hist[s, j] += 1
    return escalate
