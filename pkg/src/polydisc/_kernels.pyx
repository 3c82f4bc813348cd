# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: exact census enumeration and Monte Carlo classification.

The census kernel works in 128-bit integers with overflow detection; any
polynomial whose arithmetic would overflow, and any repeated-root
polynomial of degree >= 4, is handed back to Python for bigint treatment.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

cdef extern from *:
    """
    typedef __int128 i128;
    static inline int mul128(i128 a, i128 b, i128 *r) { return __builtin_mul_overflow(a, b, r); }
    static inline int sub128(i128 a, i128 b, i128 *r) { return __builtin_sub_overflow(a, b, r); }
    static inline i128 make128(long long hi, unsigned long long lo) {
        return (i128)(((unsigned __int128)(unsigned long long)hi << 64) | lo);
    }
    static inline long long hi128(i128 x) { return (long long)(x >> 64); }
    static inline unsigned long long lo128(i128 x) { return (unsigned long long)x; }
    """
    ctypedef long long i128
    int mul128(i128 a, i128 b, i128 *r) nogil
    int sub128(i128 a, i128 b, i128 *r) nogil
    i128 make128(long long hi, unsigned long long lo) nogil
    long long hi128(i128 x) nogil
    unsigned long long lo128(i128 x) nogil

DEF MAXC = 24

# status codes
DEF OK = 0
DEF OVERFLOW = 1
DEF FALLBACK = 2


cdef inline i128 iabs(i128 x) nogil:
    return -x if x < 0 else x


cdef inline i128 gcd128(i128 a, i128 b) nogil:
    cdef i128 t
    a = iabs(a)
    b = iabs(b)
    while b != 0:
        t = a % b
        a = b
        b = t
    return a


cdef inline int ipow(i128 base, int e, i128 *out) nogil:
    cdef i128 r = 1
    cdef int k
    for k in range(e):
        if mul128(r, base, &r):
            return OVERFLOW
    out[0] = r
    return OK


cdef int prem128(i128 *a, int da, i128 *b, int db, i128 *out, int *dout) nogil:
    """lc(b)**(da-db+1) * a mod b, written into out; degree in dout (-1 for zero)."""
    cdef int e = da - db + 1
    cdef int it, i, shift, d
    cdef i128 lb = b[db], top, t1, t2
    for i in range(da + 1):
        out[i] = a[i]
    d = da
    for it in range(e):
        if d < db:
            for i in range(d + 1):
                if mul128(out[i], lb, &out[i]):
                    return OVERFLOW
            continue
        top = out[d]
        shift = d - db
        for i in range(d):
            if mul128(out[i], lb, &t1):
                return OVERFLOW
            if i >= shift:
                if mul128(top, b[i - shift], &t2):
                    return OVERFLOW
                if sub128(t1, t2, &t1):
                    return OVERFLOW
            out[i] = t1
        d -= 1
    while d >= 0 and out[d] == 0:
        d -= 1
    dout[0] = d
    return OK


cdef int resultant_pp(i128 *p, int n, i128 *res) nogil:
    """Res(P, P') by the subresultant PRS; P has degree n >= 2."""
    cdef i128 A[MAXC]
    cdef i128 B[MAXC]
    cdef i128 R[MAXC]
    cdef int da = n, db = n - 1, dr, delta, i, s = 1
    cdef i128 g = 1, h = 1, denom, t, gd, hd
    for i in range(n + 1):
        A[i] = p[i]
    for i in range(n):
        if mul128(p[i + 1], i + 1, &B[i]):
            return OVERFLOW
    while True:
        delta = da - db
        if (da & 1) and (db & 1):
            s = -s
        if prem128(A, da, B, db, R, &dr):
            return OVERFLOW
        for i in range(db + 1):
            A[i] = B[i]
        da = db
        if ipow(h, delta, &t):
            return OVERFLOW
        if mul128(g, t, &denom):
            return OVERFLOW
        for i in range(dr + 1):
            B[i] = R[i] / denom
        db = dr
        g = A[da]
        if delta == 1:
            h = g
        elif delta > 1:
            if ipow(g, delta, &gd) or ipow(h, delta - 1, &hd):
                return OVERFLOW
            h = gd / hd
        if db < 0:
            res[0] = 0
            return OK
        if db == 0:
            if da == 1:
                res[0] = s * B[0]
                return OK
            if ipow(B[0], da, &gd) or ipow(h, da - 1, &hd):
                return OVERFLOW
            res[0] = s * (gd / hd)
            return OK


cdef int real_roots128(i128 *p, int n, int *count) nogil:
    """Distinct real roots of a squarefree P from an integer Sturm chain."""
    cdef i128 A[MAXC]
    cdef i128 B[MAXC]
    cdef i128 R[MAXC]
    cdef int da = n, db = n - 1, dr, i, e, sg
    cdef int vpos = 0, vneg = 0, lastpos, lastneg, cur
    cdef i128 c
    for i in range(n + 1):
        A[i] = p[i]
    for i in range(n):
        if mul128(p[i + 1], i + 1, &B[i]):
            return OVERFLOW
    lastpos = 1 if A[da] > 0 else -1
    lastneg = lastpos if (da % 2 == 0) else -lastpos
    cur = 1 if B[db] > 0 else -1
    if cur != lastpos:
        vpos += 1
    lastpos = cur
    cur = cur if (db % 2 == 0) else -cur
    if cur != lastneg:
        vneg += 1
    lastneg = cur
    while db > 0:
        if prem128(A, da, B, db, R, &dr):
            return OVERFLOW
        if dr < 0:
            break
        e = da - db + 1
        sg = -1 if (B[db] < 0 and (e & 1)) else 1
        c = 0
        for i in range(dr + 1):
            R[i] = -sg * R[i]
            c = gcd128(c, R[i])
        for i in range(db + 1):
            A[i] = B[i]
        da = db
        for i in range(dr + 1):
            B[i] = R[i] / c
        db = dr
        cur = 1 if B[db] > 0 else -1
        if cur != lastpos:
            vpos += 1
        lastpos = cur
        cur = cur if (db % 2 == 0) else -cur
        if cur != lastneg:
            vneg += 1
        lastneg = cur
    count[0] = vneg - vpos
    return OK


cdef int disc_sig(i128 *p, int n, i128 *disc, int *sig) nogil:
    cdef i128 res
    cdef int st, r
    st = resultant_pp(p, n, &res)
    if st:
        return st
    res = res / p[n]
    if (n * (n - 1) // 2) & 1:
        res = -res
    disc[0] = res
    if res == 0:
        if n <= 3:
            sig[0] = 0
            return OK
        return FALLBACK
    if n <= 3:
        sig[0] = 1 if res < 0 else 0
        return OK
    st = real_roots128(p, n, &r)
    if st:
        return st
    sig[0] = (n - r) // 2
    if ((sig[0] & 1) == 1) != (res < 0):
        return FALLBACK
    return OK


def disc_sig_int(coeffs):
    """(discriminant, signature) of one integer polynomial; None on overflow/fallback."""
    cdef i128 p[MAXC]
    cdef i128 d
    cdef int s, n = len(coeffs) - 1, st, i
    if n < 2 or n >= MAXC - 1:
        return None
    for i in range(n + 1):
        p[i] = <long long>coeffs[i]
    st = disc_sig(p, n, &d, &s)
    if st:
        return None
    return (int(hi128(d)) << 64) + int(lo128(d)), s


def census_block(int n,
                 cnp.int64_t[:, ::1] outer,
                 cnp.int64_t[::1] bound,
                 long long length_bound,
                 bint reduced,
                 cnp.int64_t[::1] thr_hi,
                 cnp.uint64_t[::1] thr_lo,
                 cnp.int64_t[:, ::1] hist,
                 long long check_every):
    """Enumerate polynomials whose top two coefficients are the rows of ``outer``.

    Inner coefficients a_{n-2}..a_0 range over [-bound[k], bound[k]].
    Returns (total, fallbacks, checks): fallbacks is a list of
    (coeffs, weight) pairs for Python to finish exactly; checks holds
    (coeffs, D) samples for the online cross-check.
    """
    cdef int m = thr_hi.shape[0]
    cdef i128 thr[64]
    cdef i128 p[MAXC]
    cdef long long a[MAXC]
    cdef i128 d, ad
    cdef int s, st, k, j, lo, hi, mid, w, smax = n // 2
    cdef long long total = 0, counter = 0, absum
    cdef Py_ssize_t row
    cdef int ninner = n - 1
    fallbacks = []
    checks = []
    if m > 64:
        raise ValueError("at most 64 thresholds per census pass")
    for j in range(m):
        thr[j] = make128(thr_hi[j], thr_lo[j])
    for row in range(outer.shape[0]):
        a[n] = outer[row, 0]
        a[n - 1] = outer[row, 1]
        for k in range(ninner):
            a[k] = -bound[k]
        while True:
            # height filter and orbit weight
            w = 1
            if length_bound >= 0:
                absum = 0
                for k in range(n + 1):
                    absum += a[k] if a[k] >= 0 else -a[k]
                if absum > length_bound:
                    w = 0
            if w and reduced:
                w = 2
                k = n - 1
                while k >= 0:
                    if a[k] != 0:
                        w = 4 if a[k] > 0 else 0
                        break
                    k -= 2
            if w:
                total += w
                for k in range(n + 1):
                    p[k] = a[k]
                st = disc_sig(p, n, &d, &s)
                if st:
                    fallbacks.append((tuple([a[k] for k in range(n + 1)]), w))
                else:
                    ad = iabs(d)
                    lo = 0
                    hi = m
                    while lo < hi:
                        mid = (lo + hi) // 2
                        if ad <= thr[mid]:
                            hi = mid
                        else:
                            lo = mid + 1
                    hist[s, lo] += w
                    counter += 1
                    if check_every > 0 and counter % check_every == 1:
                        checks.append((tuple([a[k] for k in range(n + 1)]),
                                       (int(hi128(d)) << 64) + int(lo128(d))))
            # advance odometer over a_0..a_{n-2}
            k = 0
            while k < ninner:
                if a[k] < bound[k]:
                    a[k] += 1
                    break
                a[k] = -bound[k]
                k += 1
            if k == ninner:
                break
    return total, fallbacks, checks


# ------------------------------------------------------------ Monte Carlo

DEF UNIT = 1.1102230246251565e-16


cdef int float_real_roots(double *p, int n, double guard, int *count) nogil:
    """Distinct real roots from a floating Sturm chain; 1 if a guard trips."""
    cdef double A[MAXC]
    cdef double B[MAXC]
    cdef double R[MAXC]
    cdef double M[MAXC]
    cdef int da = n, db = n - 1, i, k, vpos = 0, vneg = 0, lastpos, lastneg, cur, dr
    cdef double q, scale
    for i in range(n + 1):
        A[i] = p[i]
    for i in range(n):
        B[i] = (i + 1) * p[i + 1]
    lastpos = 1 if A[da] > 0 else -1
    lastneg = lastpos if (da % 2 == 0) else -lastpos
    cur = 1 if B[db] > 0 else -1
    if cur != lastpos:
        vpos += 1
    lastpos = cur
    cur = cur if (db % 2 == 0) else -cur
    if cur != lastneg:
        vneg += 1
    lastneg = cur
    while db > 0:
        for i in range(da + 1):
            R[i] = A[i]
            M[i] = fabs(A[i])
        for k in range(da, db - 1, -1):
            q = R[k] / B[db]
            for i in range(db + 1):
                R[k - db + i] -= q * B[i]
                M[k - db + i] += fabs(q * B[i])
        dr = db - 1
        # expected generic degree drop of one; anything smaller is escalated
        if fabs(R[dr]) <= guard * M[dr]:
            return 1
        for i in range(db + 1):
            A[i] = B[i]
        da = db
        for i in range(dr + 1):
            B[i] = -R[i]
        db = dr
        cur = 1 if B[db] > 0 else -1
        if cur != lastpos:
            vpos += 1
        lastpos = cur
        cur = cur if (db % 2 == 0) else -cur
        if cur != lastneg:
            vneg += 1
        lastneg = cur
    count[0] = vneg - vpos
    return 0


def mc_block(int n,
             double[:, ::1] pts,
             cnp.int32_t[:, ::1] exps,
             double[::1] coefs,
             double[::1] deltas,
             cnp.int64_t[:, ::1] hist,
             double rel_guard):
    """Classify sample points by signature and first delta with |D| <= delta.

    ``exps``/``coefs`` give the monomial expansion of the discriminant.  Each
    evaluation carries a rigorous forward error bound; samples whose
    classification is not certified are returned by index for exact
    treatment.
    """
    cdef Py_ssize_t N = pts.shape[0], idx
    cdef int T = exps.shape[0], m = deltas.shape[0]
    cdef int t, k, e, j, lo, hi, mid, s, r, maxe = 2 * n - 2
    cdef double pw[MAXC][MAXC]
    cdef double p[MAXC]
    cdef double D, S, term, err, ad, dmax, band
    cdef double gamma = 2.0 * (3 * n + 2 + T) * UNIT
    cdef bint esc
    escalate = []
    dmax = deltas[m - 1]
    for idx in range(N):
        for k in range(n + 1):
            p[k] = pts[idx, k]
            pw[k][0] = 1.0
            for e in range(1, maxe + 1):
                pw[k][e] = pw[k][e - 1] * p[k]
        D = 0.0
        S = 0.0
        for t in range(T):
            term = coefs[t]
            for k in range(n + 1):
                e = exps[t, k]
                if e:
                    term *= pw[k][e]
            D += term
            S += fabs(term)
        err = gamma * S
        ad = fabs(D)
        if ad - err > dmax * (1.0 + rel_guard):
            continue
        esc = ad <= err or p[n] == 0.0
        if not esc:
            for j in range(m):
                band = err if err > rel_guard * deltas[j] else rel_guard * deltas[j]
                if fabs(ad - deltas[j]) <= band:
                    esc = True
                    break
        if esc:
            escalate.append(idx)
            continue
        lo = 0
        hi = m
        while lo < hi:
            mid = (lo + hi) // 2
            if ad <= deltas[mid]:
                hi = mid
            else:
                lo = mid + 1
        if lo == m:
            continue
        if n <= 3:
            s = 1 if D < 0 else 0
        else:
            if float_real_roots(p, n, rel_guard, &r):
                escalate.append(idx)
                continue
            s = (n - r) // 2
            if ((s & 1) == 1) != (D < 0):
                escalate.append(idx)
                continue
        hist[s, lo] += 1
    return escalate
