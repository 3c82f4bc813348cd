import itertools

import numpy as np
import pytest

from polydisc import _backend, census
from polydisc.census import CensusSpec, run_census
from polydisc.errors import DomainError, WorkBudgetExceeded
from polydisc.polynomial import discriminant_det, signature


def brute_force(n, Q, X):
    """Direct loop over all coefficient vectors (18 cases for n=2, Q=1)."""
    counts = {}
    for a in itertools.product(range(-Q, Q + 1), repeat=n + 1):
        if a[-1] == 0:
            continue
        if abs(discriminant_det(a)) <= X:
            s = signature(a)
            counts[s] = counts.get(s, 0) + 1
    return counts


def test_hand_census():
    t = run_census(CensusSpec(2, 1, "naive", (4,)))
    assert (t.N(0), t.N(1), t.total) == (8, 6, 18)
    assert brute_force(2, 1, 4) == {0: 8, 1: 6}


def test_zero_threshold_counts_repeated_roots():
    t = run_census(CensusSpec(2, 1, "naive", (0,)))
    # x^2 and -x^2 are the only degree-2 polynomials with D = 0 and H <= 1
    assert (t.N(0), t.N(1)) == (2, 0)


@pytest.mark.parametrize("n,Q", [(2, 1), (2, 3), (3, 2), (4, 1), (4, 2), (5, 1)])
def test_total_identity(n, Q):
    t = run_census(CensusSpec(n, Q, "naive", (census.crude_discriminant_bound(n, Q),)))
    assert t.total == census.naive_total(n, Q) == sum(t.column().values())


@pytest.mark.parametrize("kind", ["naive", "length", "mahler"])
@pytest.mark.parametrize("n,Q", [(2, 3), (3, 2), (4, 1)])
def test_against_reference_enumeration(kind, n, Q):
    X = (0, 5, 50, 10 ** 6)
    t = run_census(CensusSpec(n, Q, kind, X))
    ref, total = census.reference_census(n, Q, X, kind)
    assert t.total == total
    assert {k: t.counts[k] for k in ref} == ref
    assert not t.ambiguous


def test_mahler_exact_ties_are_counted():
    # x^2 - 3 and 3x^2 - 1 have Mahler measure exactly 3
    from polydisc.polynomial import mahler_compare

    assert mahler_compare((-3, 0, 1), 3) == 0
    assert mahler_compare((-1, 0, 3), 3) == 0
    assert mahler_compare((-1, 0, 0, 0, 1), 1) == 0
    assert mahler_compare((1, -2, 1), 1) == 0
    assert mahler_compare((1, 3, 1), 2) == 1
    t = run_census(CensusSpec(2, 3, "mahler", (10 ** 6,)))
    assert not t.ambiguous


def test_thresholds_cumulative():
    t = run_census(CensusSpec(3, 3, "naive", (0, 10, 100, 1000, 10 ** 9)))
    for s in (0, 1):
        col = [t.N(s, j) for j in range(5)]
        assert col == sorted(col)


def test_reduction_matches_full_enumeration():
    a = run_census(CensusSpec(4, 2, "naive", (10, 1000), reduce=True))
    b = run_census(CensusSpec(4, 2, "naive", (10, 1000), reduce=False))
    assert a == b


def test_workers_bit_identical():
    spec = dict(n=3, Q=6, height="naive", thresholds=(0, 100, 10 ** 4))
    a = run_census(CensusSpec(**spec, workers=1))
    b = run_census(CensusSpec(**spec, workers=2))
    c = run_census(CensusSpec(**spec, workers=3))
    assert a == b == c
    assert list(a.records()) == list(c.records())


def test_backends_agree(both_backends):
    if "compiled" not in both_backends:
        pytest.skip("compiled kernels not built")
    spec = CensusSpec(4, 2, "length", (0, 7, 300, 10 ** 5))
    _backend.use("python")
    py = run_census(spec)
    _backend.use("compiled")
    cc = run_census(spec)
    assert py == cc


def test_disc_sig_kernels_agree():
    from polydisc import _pykernels

    if "compiled" not in _backend.available():
        pytest.skip("compiled kernels not built")
    from polydisc import _kernels

    rng = np.random.default_rng(4)
    native = 0
    for _ in range(500):
        n = int(rng.integers(2, 7))
        c = [int(x) for x in rng.integers(-40, 41, n + 1)]
        c[-1] = c[-1] or 1
        got = _kernels.disc_sig_int(c)
        # None means the int128 path overflowed and callers fall back to bigints
        if got is not None:
            native += 1
            assert got == _pykernels.disc_sig_int(c)
    assert native > 300


def test_shards_partition_outer_rows():
    spec = CensusSpec(3, 5, "naive", (1,), workers=4)
    plan = census.symmetry_reduce(spec)
    shards = census.partition_work(spec, plan, shards=7)
    stacked = np.concatenate(shards)
    assert len(stacked) == len(plan.outer)
    assert {tuple(r) for r in stacked} == {tuple(r) for r in plan.outer}
    sizes = [len(s) for s in shards]
    assert max(sizes) - min(sizes) <= 1


def test_mahler_plan_uses_binomial_box():
    bound, const = census.coefficient_bounds(4, 3, "mahler")
    assert list(bound) == [3, 12, 18, 12, 3]
    assert const == pytest.approx(1 / 6)


def test_budget_exceeded():
    with pytest.raises(WorkBudgetExceeded) as err:
        run_census(CensusSpec(6, 50, "naive", (1,), budget=10 ** 6))
    rec = err.value.to_record()
    assert rec["error"] == "budget-exceeded" and rec["required_operations"] > 10 ** 6


@pytest.mark.parametrize("kwargs", [
    dict(n=1, Q=2, thresholds=(1,)),
    dict(n=2, Q=0, thresholds=(1,)),
    dict(n=2, Q=2, thresholds=()),
    dict(n=2, Q=2, thresholds=(5, 3)),
    dict(n=2, Q=2, thresholds=(-1,)),
    dict(n=2, Q=2, thresholds=(1,), workers=0),
])
def test_spec_validation(kwargs):
    with pytest.raises(DomainError):
        CensusSpec(**kwargs)


def test_records_are_exact_strings():
    t = run_census(CensusSpec(2, 2, "naive", (10 ** 30,)))
    rec = list(t.records())
    assert rec[0]["X"] == str(10 ** 30)
    assert all(isinstance(r["count"], str) for r in rec)
