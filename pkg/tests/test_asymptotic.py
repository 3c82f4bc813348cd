import math
import warnings

import mpmath
import numpy as np
import pytest

from polydisc import asymptotic as A
from polydisc import volume
from polydisc.errors import DomainError
from polydisc.harness import f_n2_quadrature


# ------------------------------------------------------------ integrands

def test_delta_tilde_examples():
    assert A.delta_tilde([1.0]) == 1.0
    assert A.delta_tilde([2.0]) == 4.0
    # theta = (1, 2): 1 * 4 * (1 - 2)^2
    assert A.delta_tilde([1.0, 2.0]) == 4.0
    assert A.delta_tilde([1.0, 1.0]) == 0.0
    v = A.delta_tilde(np.array([[1.0, 2.0], [1.0, -1.0]]))
    assert v.tolist() == [4.0, 4.0]


def test_delta_tilde_symmetry_and_homogeneity():
    rng = np.random.default_rng(0)
    for m in (1, 2, 3, 4):
        th = rng.normal(size=m)
        d = A.delta_tilde(th)
        assert A.delta_tilde(th[::-1]) == pytest.approx(d)
        assert A.delta_tilde(-th) == pytest.approx(d)
        assert A.delta_tilde(2.5 * th) == pytest.approx(2.5 ** (m * (m + 1)) * d)


def test_k_tilde_examples():
    # (x - 1)^4 = x^4 - 4x^3 + 6x^2 - 4x + 1
    assert A.k_tilde(1.0, 4) == pytest.approx(1 / 6)
    assert A.k_tilde(0.0, 4) == 1.0
    assert A.k_tilde(0.5, 2, "length") == pytest.approx(1 / 2.25)
    assert A.k_tilde(3.0, 3, "mahler") == pytest.approx(1 / 27)
    t = np.linspace(-1, 1, 41)
    np.testing.assert_allclose(A.k_tilde(t, 5), A.k_tilde(-t, 5))


def test_k_tilde_breakpoints():
    assert A.k_tilde_breakpoints(2) == pytest.approx([0.5], abs=1e-10)
    assert A.k_tilde_breakpoints(4) == pytest.approx([0.25, 2 / 3], abs=1e-10)
    assert A.k_tilde_breakpoints(4, "length") == []


def test_k_tilde_integral_quadratic():
    # n=2: 1/max(1, 2|t|, t^2) on [-1, 1] integrates to 2 (1/2 + ln(2)/2)
    v, err, _ = A.k_tilde_integral(2)
    assert v == pytest.approx(1 + math.log(2), rel=1e-12)


def test_center_change_jacobian():
    rng = np.random.default_rng(1)
    for n in (2, 3, 5):
        for rho in (0.3, 1.0, 2.0):
            tau, theta = rng.normal(), rng.normal(size=n - 1)
            assert A.center_change_jacobian_fd(tau, theta, rho) == pytest.approx(
                rho ** (n - 1), rel=1e-7)


# -------------------------------------------------------------------- I4

def i4_n3_oracle():
    # [0,1] is a Beta integral; [-1,0] maps to int_0^1 u^(-2/3) (1+u)^(-2/3) du
    third = mpmath.mpf(1) / 3
    return float(mpmath.beta(third, third) + 3 * mpmath.hyp2f1(2 * third, third, 4 * third, -1))


def test_i4_trivial_and_n3():
    assert A.integrate_I4(2).value == 1.0
    r = A.integrate_I4(3, target_rel_err=1e-8)
    assert r.target_met
    assert r.value == pytest.approx(i4_n3_oracle(), rel=1e-8)


@pytest.mark.slow
def test_i4_n4_two_methods_agree():
    grid = A.integrate_I4(4, target_rel_err=1e-6)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", A.PrecisionWarning)
        mc = A.integrate_I4(4, method="mc-importance", samples=4_000_000, seed=3)
    combined = math.hypot(grid.error_estimate, mc.error_estimate)
    assert abs(grid.value - mc.value) <= 3 * combined
    assert grid.value <= A.i4_selberg_bound(4)


def test_i4_precision_warning():
    with pytest.warns(A.PrecisionWarning):
        r = A.integrate_I4(4, method="mc-importance", samples=20_000, seed=0)
    assert not r.target_met


def test_i4_sampler_density():
    a = 0.5
    x, z = A.sample_i4_coordinate(np.random.default_rng(2), a, 200_000)
    assert np.all((x > -1) & (x < 1))
    neg = float(mpmath.quad(lambda u: u ** -a * (1 + u) ** -a, [0, 1]))
    assert z == pytest.approx(math.pi + neg, rel=1e-8)
    frac = np.mean(x < 0)
    assert abs(frac - neg / z) < 4 * math.sqrt(frac * (1 - frac) / len(x))
    # positive side is Beta(1/2, 1/2): mean 1/2
    assert abs(x[x > 0].mean() - 0.5) < 0.005


@pytest.mark.parametrize("kwargs", [dict(n=1), dict(n=4, target_rel_err=0),
                                    dict(n=4, method="simpson"),
                                    dict(n=3, method="mc-importance")])
def test_i4_validation(kwargs):
    with pytest.raises(DomainError):
        A.integrate_I4(**kwargs)


# --------------------------------------------------------------- Selberg

@pytest.mark.parametrize("m,abg,expected", [
    (1, (1.0, 1.0, 0.0), 1.0),
    (1, (2.0, 3.0, 0.5), 1 / 12),
    (2, (1.0, 1.0, 1.0), 1 / 6),
])
def test_selberg_examples(m, abg, expected):
    assert A.selberg_closed_form(m, *abg) == pytest.approx(expected, rel=1e-12)


def test_selberg_quadrature_matches_closed_form():
    for m, abg in ((1, (0.5, 0.7, 0.0)), (2, (0.5, 0.5, -0.25)), (2, (1.5, 0.8, 0.3))):
        assert A.selberg_quadrature(m, *abg) == pytest.approx(
            A.selberg_closed_form(m, *abg), rel=1e-6)


@pytest.mark.parametrize("args,needle", [
    ((2, 0.0, 1.0, 0.1), "alpha"),
    ((2, 1.0, -1.0, 0.1), "beta"),
    ((3, 0.4, 1.0, -0.25), "gamma"),
    ((0, 1.0, 1.0, 0.0), "m must"),
])
def test_selberg_domain(args, needle):
    with pytest.raises(DomainError, match=needle):
        A.selberg_closed_form(*args)


def test_selberg_bound_dominates():
    assert A.i4_selberg_bound(4) >= A.integrate_I4(4).value
    with pytest.raises(DomainError):
        A.i4_selberg_bound(3)


# --------------------------------------------------------------- lambda0

def test_lambda0_quadratic_closed_form():
    assert A.lambda0(2).value == pytest.approx(2 + math.log(4), rel=1e-10)


def test_lambda0_positive_and_components():
    r = A.lambda0(3)
    c = r.components
    assert r.value > 0 and c["I4"] > 0
    pref = 4 / 24 * 2 * 3 * 4 / 5
    assert r.value == pytest.approx(pref * c["Ktau_integral"] * c["I4"], rel=1e-14)


def test_lambda0_heights_order():
    vals = {k: A.lambda0(3, k).value for k in ("naive", "length", "mahler")}
    # larger height means a smaller unit ball
    assert vals["length"] < vals["naive"] < vals["mahler"]


def test_i3_scaling():
    for n in (2, 3, 4):
        assert A.i3(2.0, n, I4=1.0) / A.i3(1.0, n, I4=1.0) == pytest.approx(2 ** (2 / n))


def test_cone_count():
    assert [A.cone_count(n) for n in (2, 3, 5)] == [2, 4, 8]


# ----------------------------------------------------- scaling reduction

@pytest.mark.parametrize("m,c,d1,d2,spec", [
    (1, 2, -1.0, 0.5, "radial"),
    (2, 6, -0.5, 0.5, "delta_tilde"),
])
def test_scaling_reduction(m, c, d1, d2, spec):
    r = A.scaling_reduction_check(m, c, d1, d2, kappa=1.7, f_spec=spec)
    assert r["cone_rel_diff"] < 1e-4
    assert r["kappa_ratio_rel_diff"] < 1e-4
    assert r["consistent_normalization"] == "2m"


def test_i3_reduction_parameters():
    m, c, d1, d2, kappa = A.i3_reduction_parameters(3, K=2.0)
    assert (m, c, d1, d2) == (2, 6, -0.5, 0.5) and kappa == 16.0


# -------------------------------------------------- root-space integral

@pytest.mark.parametrize("n", [2, 3])
def test_root_space_uniform_bound_and_f0(n):
    delta = 0.5
    rho = delta ** (1 / (n * (n - 1)))
    mean, se, worst = A.i1_tilde_mc(n, rho, 300_000, seed=4)
    assert worst <= 1.0 + 1e-12
    f0 = A.f0_from_root_space(n, delta, mean)
    f0_se = A.f0_from_root_space(n, delta, se)
    if n == 2:
        ref, ref_se = f_n2_quadrature(0, delta), 0.0
    else:
        e = volume.estimate_f(n, 0, delta, 1_000_000, seed=4)
        ref, ref_se = e.mean, e.stderr
    assert abs(f0 - ref) <= 4 * math.hypot(f0_se, ref_se)


def test_small_scale_limit_approaches_lambda0():
    # for quadratics f_0(delta) / delta -> lambda0 with O(sqrt(delta) log) drift
    lam = A.lambda0(2).value
    assert f_n2_quadrature(0, 1e-4) / 1e-4 == pytest.approx(lam, rel=2e-3)
