"""Exhaustive census of integer polynomials by signature and discriminant size.

``run_census`` enumerates every integer polynomial of degree ``n`` with
height at most ``Q`` and reports exact counts

    N_s(Q, X_j) = #{P : h(P) <= Q, P has s complex root pairs, |D(P)| <= X_j}

for a sorted list of integer thresholds.  The enumeration visits one
polynomial per orbit of the group generated by ``P -> -P`` and
``P(x) -> P(-x)`` and multiplies by the orbit size.
"""
from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import _backend
from .errors import DomainError, WorkBudgetExceeded
from .polynomial import HeightKind, discriminant_det, discriminant_prs, mahler_compare, signature

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 2 * 10 ** 10
CHECK_EVERY = 10 ** 6
INT128_MAX = 2 ** 127 - 1


@dataclass(frozen=True)
class CensusSpec:
    n: int
    Q: int
    height: HeightKind = HeightKind.NAIVE
    thresholds: Tuple[int, ...] = ()
    workers: int = 1
    reduce: bool = True
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        object.__setattr__(self, "height", HeightKind.parse(self.height))
        object.__setattr__(self, "thresholds", tuple(int(x) for x in self.thresholds))
        if self.n < 2:
            raise DomainError(f"degree n must be >= 2, got {self.n}")
        if self.Q < 1:
            raise DomainError(f"height bound Q must be >= 1, got {self.Q}")
        if self.workers < 1:
            raise DomainError("workers must be positive")
        if not self.thresholds:
            raise DomainError("at least one threshold X is required")
        if any(x < 0 for x in self.thresholds):
            raise DomainError("thresholds must be nonnegative")
        if any(b <= a for a, b in zip(self.thresholds, self.thresholds[1:])):
            raise DomainError("thresholds must be strictly increasing")
        if len(self.thresholds) > 64:
            raise DomainError("at most 64 thresholds per census")


@dataclass
class EnumerationPlan:
    """Outer coefficient rows ``(a_n, a_{n-1})`` plus the inner cube bounds."""

    n: int
    outer: np.ndarray
    bound: np.ndarray
    length_bound: int
    reduced: bool
    height_constant: float

    @property
    def inner_size(self):
        return int(np.prod(2 * self.bound[: self.n - 1] + 1))

    @property
    def cardinality(self):
        return len(self.outer) * self.inner_size


@dataclass
class CensusTable:
    spec: CensusSpec
    counts: Dict[Tuple[int, int], int]
    total: int
    elapsed: float
    metadata: dict = field(default_factory=dict)
    ambiguous: List[tuple] = field(default_factory=list)

    def N(self, s, j=-1):
        if j < 0:
            j += len(self.spec.thresholds)
        return self.counts[(s, j)]

    def column(self, j=-1):
        return {s: self.N(s, j) for s in range(self.spec.n // 2 + 1)}

    def records(self):
        sp = self.spec
        for s in range(sp.n // 2 + 1):
            for j, x in enumerate(sp.thresholds):
                yield {"n": sp.n, "Q": sp.Q, "height": sp.height.value, "s": s,
                       "X": str(x), "count": str(self.counts[(s, j)])}

    def __eq__(self, other):
        if not isinstance(other, CensusTable):
            return NotImplemented
        return (self.counts == other.counts and self.total == other.total
                and self.spec.n == other.spec.n and self.spec.Q == other.spec.Q
                and self.spec.thresholds == other.spec.thresholds
                and self.spec.height == other.spec.height)


# ------------------------------------------------------------------ plans

def coefficient_bounds(n, Q, kind):
    """Per-coefficient bounds of a cube containing ``{h <= Q}`` and the constant used.

    naive and length satisfy ``h >= naive``; Mahler satisfies
    ``|a_k| <= binom(n, k) M(P)``.
    """
    kind = HeightKind.parse(kind)
    if kind is HeightKind.MAHLER:
        return np.array([math.comb(n, k) * Q for k in range(n + 1)], dtype=np.int64), \
            1.0 / math.comb(n, n // 2)
    return np.full(n + 1, Q, dtype=np.int64), 1.0


def symmetry_reduce(spec: CensusSpec) -> EnumerationPlan:
    """Enumeration plan visiting one representative per sign/reflection orbit.

    With ``spec.reduce`` the leading coefficient is positive and ``a_{n-1} >= 0``;
    the kernel assigns each representative its orbit size (2 or 4) and skips
    non-representatives.  Without it every polynomial is visited with weight 1.
    """
    n, Q = spec.n, spec.Q
    bound, const = coefficient_bounds(n, Q, spec.height)
    bn, bn1 = int(bound[n]), int(bound[n - 1])
    if spec.reduce:
        lead = range(1, bn + 1)
        second = range(0, bn1 + 1)
    else:
        lead = [a for a in range(-bn, bn + 1) if a != 0]
        second = range(-bn1, bn1 + 1)
    outer = np.array([(a, b) for a in lead for b in second], dtype=np.int64).reshape(-1, 2)
    length_bound = Q if spec.height is HeightKind.LENGTH else -1
    return EnumerationPlan(n, outer, bound, length_bound, spec.reduce, const)


def partition_work(spec: CensusSpec, plan: Optional[EnumerationPlan] = None, shards=None):
    """Split the outer rows into at least ``workers`` shards of near-equal size."""
    plan = plan or symmetry_reduce(spec)
    k = shards or spec.workers
    k = max(1, min(k, len(plan.outer)))
    return [chunk for chunk in np.array_split(plan.outer, k) if len(chunk)]


def _split_thresholds(thresholds):
    hi = np.empty(len(thresholds), dtype=np.int64)
    lo = np.empty(len(thresholds), dtype=np.uint64)
    for j, x in enumerate(thresholds):
        x = min(int(x), INT128_MAX)
        hi[j] = x >> 64
        lo[j] = x & ((1 << 64) - 1)
    return hi, lo


def estimate_operations(plan):
    return plan.cardinality * plan.n ** 2


# ------------------------------------------------------------- execution

def _first_index(ad, thresholds):
    lo, hi = 0, len(thresholds)
    while lo < hi:
        mid = (lo + hi) // 2
        if ad <= thresholds[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _run_shard(args):
    n, outer, bound, length_bound, reduced, thresholds, kind, backend_name = args
    if backend_name and _backend.name() != backend_name:
        _backend.use(backend_name)
    hist = np.zeros((n // 2 + 1, len(thresholds) + 1), dtype=np.int64)
    if HeightKind.parse(kind) is HeightKind.MAHLER:
        total, ambiguous = _mahler_shard(n, outer, bound, reduced, thresholds, hist)
        return hist, total, ambiguous, 0
    hi, lo = _split_thresholds(thresholds)
    kern = _backend.get()
    total, fallbacks, checks = kern.census_block(
        n, np.ascontiguousarray(outer), bound, length_bound, reduced, hi, lo, hist, CHECK_EVERY)
    for coeffs, w in fallbacks:
        d = discriminant_prs(coeffs)
        hist[signature(coeffs), _first_index(abs(d), thresholds)] += w
    for coeffs, d in checks:
        if discriminant_det(coeffs) != d:
            raise AssertionError(f"online self-check failed for {coeffs}")
    return hist, total, [], len(fallbacks)


def _mahler_shard(n, outer, bound, reduced, thresholds, hist):
    import itertools

    Q = int(bound[n])
    binoms = [math.comb(n, k) for k in range(n + 1)]
    total = 0
    ambiguous = []
    inner = [range(-int(b), int(b) + 1) for b in bound[: n - 1]]
    for an, an1 in np.asarray(outer).tolist():
        for rest in itertools.product(*reversed(inner)):
            a = list(reversed(rest)) + [an1, an]
            w = 1
            if reduced:
                w = 2
                for k in range(n - 1, -1, -2):
                    if a[k]:
                        w = 4 if a[k] > 0 else 0
                        break
                if not w:
                    continue
            lower = max(abs(x) / b for x, b in zip(a, binoms))
            if lower > Q:
                continue
            if sum(x * x for x in a) > Q * Q and mahler_compare(a, Q) > 0:
                continue
            total += w
            d = discriminant_prs(a)
            hist[signature(a), _first_index(abs(d), thresholds)] += w
    return total, ambiguous


def run_census(spec: CensusSpec) -> CensusTable:
    """Exact counts ``N_s(Q, X_j)`` for every signature ``s`` and threshold ``X_j``."""
    t0 = time.perf_counter()
    plan = symmetry_reduce(spec)
    ops = estimate_operations(plan)
    if ops > spec.budget:
        raise WorkBudgetExceeded(
            f"census n={spec.n} Q={spec.Q} needs about {ops:.3g} operations, "
            f"budget is {spec.budget:.3g}", required=ops, budget=spec.budget)
    shards = partition_work(spec, plan, shards=spec.workers if spec.workers > 1 else 1)
    args = [(spec.n, sh, plan.bound, plan.length_bound, plan.reduced, spec.thresholds,
             spec.height.value, _backend.name()) for sh in shards]
    if spec.workers > 1 and len(shards) > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            results = list(pool.map(_run_shard, args))
    else:
        results = [_run_shard(a) for a in args]
    m = len(spec.thresholds)
    hist = np.zeros((spec.n // 2 + 1, m + 1), dtype=object)
    total = 0
    ambiguous = []
    n_fallback = 0
    for h, t, amb, nf in results:
        hist += h.astype(object)
        total += int(t)
        ambiguous.extend(amb)
        n_fallback += nf
    counts = {}
    for s in range(spec.n // 2 + 1):
        run = 0
        for j in range(m):
            run += int(hist[s, j])
            counts[(s, j)] = run
    meta = {
        "backend": _backend.name(),
        "height_constant": plan.height_constant,
        "enumerated": plan.cardinality,
        "orbit_reduction": spec.reduce,
        "shards": len(shards),
        "exact_fallbacks": n_fallback,
        "ambiguous": len(ambiguous),
    }
    return CensusTable(spec, counts, total, time.perf_counter() - t0, meta, ambiguous)


def naive_total(n, Q):
    """``#P_n(Q) = 2Q(2Q+1)^n`` for the naive height."""
    return 2 * Q * (2 * Q + 1) ** n


def crude_discriminant_bound(n, Q):
    """Upper bound for ``|D|`` over naive-height-``Q`` polynomials."""
    return (n + 1) ** n * (2 * Q) ** (2 * n - 2) * n ** n


def reference_census(n, Q, thresholds, kind=HeightKind.NAIVE):
    """Unpruned enumeration using only ``discriminant_det`` and ``signature``."""
    import itertools

    from .polynomial import height

    kind = HeightKind.parse(kind)
    bound, _ = coefficient_bounds(n, Q, kind)
    counts = {(s, j): 0 for s in range(n // 2 + 1) for j in range(len(thresholds))}
    total = 0
    for a in itertools.product(*[range(-int(b), int(b) + 1) for b in bound]):
        if a[-1] == 0:
            continue
        if kind is HeightKind.MAHLER:
            if mahler_compare(a, Q) > 0:
                continue
        elif height(a, kind) > Q:
            continue
        total += 1
        d = abs(discriminant_det(a))
        s = signature(a)
        for j, x in enumerate(thresholds):
            if d <= x:
                counts[(s, j)] += 1
    return counts, total
