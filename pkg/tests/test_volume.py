import math

import numpy as np
import pytest

from polydisc import _backend, volume
from polydisc.errors import DomainError
from polydisc.harness import f_n2_quadrature
from polydisc.polynomial import discriminant_prs, height, mahler_measure


def within(est, target, k=4.0):
    return abs(est.mean - target) <= k * est.stderr + 1e-12


# -------------------------------------------------------------- sampling

@pytest.mark.parametrize("kind", ["naive", "length", "mahler"])
def test_samples_lie_in_unit_ball(kind):
    rng = volume.stream(3)
    pts = volume.sample_unit_ball(kind, rng, 3, size=2000)
    assert pts.shape == (2000, 4)
    h = [height(p, kind) if kind != "mahler" else mahler_measure(p) for p in pts[:300]]
    assert max(h) <= 1 + 1e-9


def test_length_ball_is_uniform():
    # first coordinate of a uniform point of the l1 ball: E|x| = 1/(d+1) in dimension d
    pts = volume.sample_unit_ball("length", volume.stream(5), 2, size=200_000)
    a = np.abs(pts[:, 0])
    se = a.std() / math.sqrt(len(a))
    assert abs(a.mean() - 0.25) < 4 * se
    assert abs(pts[:, 1].mean()) < 4 * pts[:, 1].std() / math.sqrt(len(a))


def test_streams_are_independent_of_order():
    a = volume.stream(11, 2).random(5)
    volume.stream(11, 0).random(100)
    b = volume.stream(11, 2).random(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, volume.stream(11, 3).random(5))


def test_reference_volumes():
    assert volume.reference_volume(3, "naive") == 16
    assert volume.reference_volume(2, "length") == pytest.approx(8 / 6)
    assert volume.reference_volume(2, "mahler") == 2 * 4 * 2


# ------------------------------------------------------------ estimates

def test_large_delta_covers_cube():
    # |D| <= 27 on [-1,1]^3 for quadratics, so delta=27 captures every sample
    e = volume.estimate_f(2, None, 27.0, 20_000, seed=1)
    assert e.mean == 8.0 and e.hits == e.samples


def test_zero_delta_has_zero_volume():
    e = volume.estimate_f(3, 0, 0.0, 50_000, seed=2)
    assert e.mean == 0.0 and e.hits == 0


@pytest.mark.parametrize("s", [0, 1])
def test_quadratic_against_quadrature(s):
    e = volume.estimate_f(2, s, 0.5, 400_000, seed=3)
    assert within(e, f_n2_quadrature(s, 0.5))


def test_grid_is_monotone_and_matches_single_runs():
    deltas = [1e-3, 1e-2, 0.1, 1.0]
    grid = volume.estimate_f_grid(3, None, deltas, 100_000, seed=4)
    means = [e.mean for e in grid]
    assert means == sorted(means)
    single = volume.estimate_f(3, None, 0.1, 100_000, seed=4)
    assert single.hits == grid[2].hits


def test_signatures_sum_to_total():
    deltas = [0.01, 0.3]
    tot = volume.estimate_f_grid(4, None, deltas, 60_000, seed=6)
    parts = [volume.estimate_f_grid(4, s, deltas, 60_000, seed=6) for s in range(3)]
    for j in range(2):
        assert sum(p[j].hits for p in parts) == tot[j].hits


def test_full_signature_sum_is_reference_volume():
    bound = 10.0 ** 12
    parts = [volume.estimate_f(3, s, bound, 30_000, seed=8) for s in (0, 1)]
    assert sum(p.mean for p in parts) == pytest.approx(16.0)


def test_determinism_and_worker_sharding():
    a = volume.estimate_f_grid(3, 1, [0.01, 0.1], 80_000, seed=9)
    b = volume.estimate_f_grid(3, 1, [0.01, 0.1], 80_000, seed=9)
    assert [e.to_json() for e in a] == [e.to_json() for e in b]
    c = volume.estimate_f_grid(3, 1, [0.01, 0.1], 80_000, seed=9, workers=2)
    d = volume.estimate_f_grid(3, 1, [0.01, 0.1], 80_000, seed=9, workers=2)
    assert [e.hits for e in c] == [e.hits for e in d]
    # different sharding is a different but statistically equivalent estimator
    assert abs(c[1].mean - a[1].mean) < 5 * math.hypot(a[1].stderr, c[1].stderr)


def test_backends_agree(both_backends):
    if "compiled" not in both_backends:
        pytest.skip("compiled kernels not built")
    out = {}
    for name in ("python", "compiled"):
        _backend.use(name)
        out[name] = [e.hits for e in volume.estimate_f_grid(4, None, [1e-3, 0.05], 20_000, 10)]
    assert out["python"] == out["compiled"]


def test_mahler_estimate_runs():
    e = volume.estimate_f(2, None, 10.0, 20_000, seed=12, kind="mahler")
    # the Mahler unit ball of quadratics is strictly inside the binomial box
    assert 0 < e.mean < volume.reference_volume(2, "mahler")


@pytest.mark.parametrize("kwargs", [
    dict(n=1, s=0, delta=1.0, samples=10, seed=0),
    dict(n=3, s=2, delta=1.0, samples=10, seed=0),
    dict(n=3, s=0, delta=-1.0, samples=10, seed=0),
    dict(n=3, s=0, delta=1.0, samples=0, seed=0),
])
def test_validation(kwargs):
    with pytest.raises(DomainError):
        volume.estimate_f(**kwargs)


def test_unsorted_grid_rejected():
    with pytest.raises(DomainError):
        volume.estimate_f_grid(3, 0, [0.1, 0.01], 10, 0)


# ---------------------------------------------------- exact classification

def test_exact_classify():
    # x^2 - 0.25: D = 1, two real roots
    assert volume.exact_classify([-0.25, 0.0, 1.0], [0.5, 1.0, 2.0]) == (0, 1)
    assert volume.exact_classify([0.25, 0.0, 1.0], [0.5]) is None
    assert volume.exact_classify([0.25, 0.0, 1.0], [1.0]) == (1, 0)
    assert volume.exact_classify([0.5, 0.5, 0.0], [1.0]) is None


def test_discriminant_scaling_on_doubles():
    rng = np.random.default_rng(13)
    for n in (2, 3, 4):
        x = rng.integers(-9, 10, n + 1)
        x[-1] = x[-1] or 1
        d = discriminant_prs(list(map(int, x)))
        assert discriminant_prs(list(map(int, 3 * x))) == 3 ** (2 * n - 2) * d


# ------------------------------------------------------- inversion identity

@pytest.mark.parametrize("n", [2, 3])
def test_inversion_symmetry(n):
    r = volume.inversion_symmetry_check(n, 0.5, 100_000, seed=14)
    assert r["pass"] and r["complement_pass"]


def test_inversion_zero_delta():
    assert volume.inversion_symmetry_check(3, 0.0, 10, 0)["lhs"]["value"] == 0.0
