"""Monte Carlo estimates of f_s(delta), the volume of

    {a in R^{n+1} : h(a) <= 1, a has s complex root pairs, |D(a)| <= delta}.

Samples are drawn uniformly from a reference region containing the unit
ball of the height; each worker shard owns an independent Philox stream
keyed by ``(seed, shard)``.  Classification is certified: the float kernel
carries an error bound and escalates doubtful samples to exact integer
arithmetic on the (exactly representable) double coordinates.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import List, Optional

import numpy as np

from . import _backend
from .errors import DomainError, NumericFailure
from .polynomial import HeightKind, discriminant_prs, signature
from .symbolic import discriminant_monomials

CHUNK = 1 << 17
REL_GUARD = 1e-9
MAHLER_GUARD = 1e-6


@dataclass
class McEstimate:
    mean: float
    stderr: float
    samples: int
    hits: int
    seed: int
    n: int = 0
    s: Optional[int] = None
    height: str = "naive"
    delta: float = 0.0
    escalated: int = 0
    ambiguous: int = 0
    meta: dict = field(default_factory=dict)

    def to_json(self):
        d = asdict(self)
        d.pop("meta")
        return d


# ------------------------------------------------------------- sampling

def stream(seed, shard=0):
    """Counter-based generator for ``(seed, shard)``; independent of scheduling."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(shard),))
    return np.random.Generator(np.random.Philox(ss))


def reference_volume(n, kind):
    kind = HeightKind.parse(kind)
    if kind is HeightKind.NAIVE:
        return 2.0 ** (n + 1)
    if kind is HeightKind.LENGTH:
        return 2.0 ** (n + 1) / math.factorial(n + 1)
    return float(np.prod([2.0 * math.comb(n, k) for k in range(n + 1)]))


def _draw_reference(rng, n, kind, size):
    """Uniform points of the reference region (unit ball for naive/length)."""
    if kind is HeightKind.NAIVE:
        return rng.random((size, n + 1)) * 2.0 - 1.0
    if kind is HeightKind.LENGTH:
        e = rng.standard_exponential((size, n + 2))
        pts = e[:, : n + 1] / e.sum(axis=1, keepdims=True)
        signs = rng.integers(0, 2, size=(size, n + 1)) * 2 - 1
        return pts * signs
    box = np.array([math.comb(n, k) for k in range(n + 1)], dtype=float)
    return (rng.random((size, n + 1)) * 2.0 - 1.0) * box


def mahler_batch(pts):
    """Mahler measures of many coefficient rows (low first) via companion eigenvalues."""
    pts = np.asarray(pts, dtype=float)
    n = pts.shape[1] - 1
    lead = pts[:, -1]
    comp = np.zeros((len(pts), n, n))
    comp[:, 0, :] = -pts[:, -2::-1] / lead[:, None]
    if n > 1:
        comp[:, np.arange(1, n), np.arange(n - 1)] = 1.0
    roots = np.linalg.eigvals(comp)
    return np.abs(lead) * np.prod(np.maximum(1.0, np.abs(roots)), axis=1)


def _mahler_filter(pts):
    from .polynomial import mahler_measure_mp

    m = mahler_batch(pts)
    keep = m <= 1.0
    close = np.flatnonzero(np.abs(m - 1.0) < MAHLER_GUARD)
    for i in close:
        keep[i] = mahler_measure_mp(pts[i].tolist(), dps=40) <= 1
    return pts[keep]


def sample_unit_ball(kind, rng, n, size=1, max_tries=10 ** 7):
    """``size`` points uniform on ``{h(a) <= 1}`` in R^{n+1}."""
    kind = HeightKind.parse(kind)
    if kind is not HeightKind.MAHLER:
        return _draw_reference(rng, n, kind, size)
    out = []
    got = tried = 0
    while got < size:
        batch = max(1024, 4 * (size - got))
        pts = _mahler_filter(_draw_reference(rng, n, kind, batch))
        tried += batch
        out.append(pts)
        got += len(pts)
        if tried > max_tries and got < size:
            raise NumericFailure(
                f"Mahler rejection budget exhausted: {got} of {size} accepted "
                f"after {tried} proposals (rate {got / tried:.2e})")
    return np.concatenate(out)[:size]


# ------------------------------------------------------- classification

def exact_classify(point, deltas):
    """Exact ``(s, j)`` for one double-precision point, or None if above all deltas."""
    fr = [Fraction(float(x)) for x in point]
    if fr[-1] == 0:
        return None
    scale = math.lcm(*[f.denominator for f in fr])
    ints = [int(f * scale) for f in fr]
    n = len(ints) - 1
    d = abs(discriminant_prs(ints))
    norm = scale ** (2 * n - 2)
    for j, delta in enumerate(deltas):
        if d <= Fraction(float(delta)) * norm:
            return signature(ints), j
    return None


def _shard_counts(args):
    n, kind, deltas, samples, seed, shard, backend_name = args
    if backend_name and _backend.name() != backend_name:
        _backend.use(backend_name)
    kind = HeightKind.parse(kind)
    kern = _backend.get()
    exps, coefs = discriminant_monomials(n)
    deltas = np.asarray(deltas, dtype=float)
    hist = np.zeros((n // 2 + 1, len(deltas) + 1), dtype=np.int64)
    rng = stream(seed, shard)
    escalated = 0
    accepted = 0
    done = 0
    while done < samples:
        size = min(CHUNK, samples - done)
        pts = _draw_reference(rng, n, kind, size)
        done += size
        if kind is HeightKind.MAHLER:
            pts = _mahler_filter(pts)
        accepted += len(pts)
        pts = np.ascontiguousarray(pts)
        esc = kern.mc_block(n, pts, exps, coefs, deltas, hist, REL_GUARD)
        escalated += len(esc)
        for i in esc:
            out = exact_classify(pts[i], deltas)
            if out is not None:
                hist[out[0], out[1]] += 1
    return hist, escalated, accepted


def _shard_sizes(samples, workers):
    base, extra = divmod(samples, workers)
    return [base + (1 if i < extra else 0) for i in range(workers)]


def mc_histogram(n, kind, deltas, samples, seed, workers=1):
    """Per-signature counts of samples whose first satisfied threshold is ``deltas[j]``."""
    kind = HeightKind.parse(kind)
    if n < 2:
        raise DomainError("degree n must be >= 2")
    if samples < 1:
        raise DomainError("samples must be >= 1")
    deltas = [float(d) for d in deltas]
    if any(d < 0 for d in deltas):
        raise DomainError("delta must be nonnegative")
    if any(b < a for a, b in zip(deltas, deltas[1:])):
        raise DomainError("delta grid must be sorted ascending")
    sizes = _shard_sizes(int(samples), int(workers))
    args = [(n, kind.value, deltas, sz, seed, i, _backend.name())
            for i, sz in enumerate(sizes) if sz]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_shard_counts, args))
    else:
        results = [_shard_counts(a) for a in args]
    hist = sum(r[0] for r in results)
    escalated = sum(r[1] for r in results)
    accepted = sum(r[2] for r in results)
    return hist, escalated, accepted


def _estimates(n, s, kind, deltas, hist, samples, seed, escalated, elapsed):
    kind = HeightKind.parse(kind)
    vol = reference_volume(n, kind)
    rows = hist[:, : len(deltas)] if s is None else hist[s : s + 1, : len(deltas)]
    cum = np.cumsum(rows.sum(axis=0))
    out = []
    for j, delta in enumerate(deltas):
        hits = int(cum[j])
        p = hits / samples
        out.append(McEstimate(
            mean=vol * p, stderr=vol * math.sqrt(p * (1 - p) / samples), samples=int(samples),
            hits=hits, seed=int(seed), n=n, s=s, height=kind.value, delta=float(delta),
            escalated=int(escalated), ambiguous=0,
            meta={"backend": _backend.name(), "reference_volume": vol, "elapsed": elapsed}))
    return out


def estimate_f_grid(n, s, deltas, samples, seed, kind=HeightKind.NAIVE, workers=1):
    """Estimates of f_s on a sorted delta grid from one shared pass over the samples.

    ``s=None`` sums over all signatures.  Estimates are nondecreasing in delta.
    """
    if s is not None and not 0 <= s <= n // 2:
        raise DomainError(f"signature s={s} outside 0..{n // 2}")
    t0 = time.perf_counter()
    hist, esc, _ = mc_histogram(n, kind, deltas, samples, seed, workers)
    return _estimates(n, s, kind, list(deltas), hist, samples, seed, esc,
                      time.perf_counter() - t0)


def estimate_f(n, s, delta, samples, seed, kind=HeightKind.NAIVE, workers=1):
    return estimate_f_grid(n, s, [delta], samples, seed, kind, workers)[0]


# ------------------------------------------- root-space inversion check

def _monic_coeffs(roots):
    """Coefficients (low first) of prod (x - r_i) for each row of ``roots``."""
    N, n = roots.shape
    c = np.zeros((N, n + 1))
    c[:, 0] = 1.0
    for k in range(n):
        z = roots[:, k]
        c[:, 1 : k + 2] = c[:, 0 : k + 1] - z[:, None] * c[:, 1 : k + 2]
        c[:, 0] = -z * c[:, 0]
    return c


def height_rows(c, kind):
    kind = HeightKind.parse(kind)
    if kind is HeightKind.NAIVE:
        return np.max(np.abs(c), axis=1)
    if kind is HeightKind.LENGTH:
        return np.sum(np.abs(c), axis=1)
    return mahler_batch(c)


def log_root_integrand(alpha, delta, kind=HeightKind.NAIVE):
    """log of sqrt(Delta(alpha)) * Psi(alpha)**(n+1) for rows of ``alpha``."""
    N, n = alpha.shape
    logdisc = np.zeros(N)
    for i in range(n):
        for j in range(i + 1, n):
            logdisc += 2.0 * np.log(np.abs(alpha[:, i] - alpha[:, j]))
    logK = -np.log(height_rows(_monic_coeffs(alpha), kind))
    with np.errstate(divide="ignore"):
        logpsi = np.minimum((math.log(delta) - logdisc) / (2 * n - 2) if delta > 0
                            else np.full(N, -np.inf), logK)
    return 0.5 * logdisc + (n + 1) * logpsi


def inversion_symmetry_check(n, delta, samples, seed, kind=HeightKind.NAIVE):
    """Both sides of the root-inversion identity

        int_{R^n} g = 2 int_{[-1,1] x R^{n-1}} g,   g = sqrt(Delta) Psi^{n+1},

    by independent Monte Carlo runs, plus the complement region evaluated
    through the substitution alpha_i = 1/beta_i (Jacobian prod beta^-2).
    """
    if delta < 0:
        raise DomainError("delta must be nonnegative")
    if delta == 0:
        zero = {"value": 0.0, "stderr": 0.0}
        return {"n": n, "delta": 0.0, "lhs": zero, "rhs": zero, "complement": zero,
                "difference": 0.0, "combined_stderr": 0.0, "pass": True}
    rng_full, rng_half, rng_comp = stream(seed, 0), stream(seed, 1), stream(seed, 2)

    def cauchy(rng, size):
        u = rng.random(size)
        x = np.tan(np.pi * (u - 0.5))
        return x, -np.log(np.pi * (1.0 + x * x))

    def run(draw):
        total = total2 = 0.0
        done = 0
        while done < samples:
            size = min(CHUNK, samples - done)
            vals = draw(size)
            total += vals.sum()
            total2 += (vals * vals).sum()
            done += size
        mean = float(total / samples)
        var = max(float(total2 / samples) - mean * mean, 0.0)
        return mean, math.sqrt(var / samples)

    def full(size):
        x, logp = cauchy(rng_full, (size, n))
        return np.exp(log_root_integrand(x, delta, kind) - logp.sum(axis=1))

    def half(size):
        x, logp = cauchy(rng_half, (size, n))
        x[:, 0] = rng_half.random(size) * 2.0 - 1.0
        logp[:, 0] = math.log(0.5)
        return np.exp(log_root_integrand(x, delta, kind) - logp.sum(axis=1))

    def complement(size):
        beta, logp = cauchy(rng_comp, (size, n))
        beta[:, 0] = rng_comp.random(size) * 2.0 - 1.0
        logp[:, 0] = math.log(0.5)
        alpha = 1.0 / beta
        logjac = -2.0 * np.log(np.abs(beta)).sum(axis=1)
        return np.exp(log_root_integrand(alpha, delta, kind) + logjac - logp.sum(axis=1))

    lhs, lhs_se = run(full)
    rhs, rhs_se = run(half)
    comp, comp_se = run(complement)
    combined = math.sqrt(lhs_se ** 2 + 4.0 * rhs_se ** 2)
    diff = lhs - 2.0 * rhs
    return {
        "n": n, "delta": delta, "samples": samples, "seed": seed,
        "lhs": {"value": lhs, "stderr": lhs_se},
        "rhs": {"value": rhs, "stderr": rhs_se},
        "complement": {"value": comp, "stderr": comp_se},
        "difference": diff, "combined_stderr": combined,
        "pass": bool(abs(diff) <= 4.0 * combined),
        "complement_pass": bool(abs(comp - rhs) <= 4.0 * math.hypot(comp_se, rhs_se)),
    }
