import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polydisc import intpoly
from polydisc.errors import DegenerateInputError, NumericFailure, UnsupportedDegreeError
from polydisc.polynomial import (HeightKind, IntPolynomial, bareiss_det, coeffs_from_roots,
                                 discriminant_det, discriminant_from_roots, discriminant_prs,
                                 has_repeated_root, height, jacobian_fd, jacobian_formula,
                                 mahler_measure, mahler_measure_mp, resultant, roots_numeric,
                                 signature, sylvester_matrix)

coeff_lists = st.lists(st.integers(-50, 50), min_size=3, max_size=7).filter(lambda c: c[-1] != 0)
real_vectors = st.lists(st.floats(-10, 10, allow_nan=False), min_size=3, max_size=6).filter(
    lambda c: abs(c[-1]) > 1e-3)


# ----------------------------------------------------------------- types

def test_intpolynomial_invariants():
    p = IntPolynomial((1, 2, 3))
    assert p.degree == 2 and len(p) == 3
    with pytest.raises(DegenerateInputError):
        IntPolynomial((1, 2, 0))
    with pytest.raises(UnsupportedDegreeError):
        IntPolynomial((5,))
    assert (-p).coeffs == (-1, -2, -3)
    assert p.reflect().coeffs == (1, -2, 3)
    assert p.reversed().coeffs == (3, 2, 1)


# --------------------------------------------------------------- heights

def test_height_examples():
    assert height((-1, 0, 1), "naive") == 1
    assert height((-1, 0, 1), "length") == 2
    assert height(IntPolynomial((-1, 0, 1)), HeightKind.MAHLER) == pytest.approx(1.0, rel=1e-12)
    # 2x - 1 has its root inside the unit disc
    assert height((-1, 2), "mahler") == pytest.approx(2.0, rel=1e-12)
    # x^2 - 3x + 1: roots (3 +- sqrt5)/2, one outside the unit disc
    assert height((1, -3, 1), "mahler") == pytest.approx((3 + math.sqrt(5)) / 2, rel=1e-12)


def test_height_mahler_degenerate():
    with pytest.raises(DegenerateInputError):
        height((0, 0, 0), "mahler")
    with pytest.raises(DegenerateInputError):
        height((1, 2, 0), "mahler")


def test_height_kind_parse():
    assert HeightKind.parse("Naive") is HeightKind.NAIVE
    with pytest.raises(ValueError):
        HeightKind.parse("euclid")


@settings(max_examples=60, deadline=None)
@given(real_vectors, st.floats(0.1, 5.0), st.sampled_from(list(HeightKind)))
def test_height_axioms(a, t, kind):
    """Absolute homogeneity, sign change, reversal and alternation invariance."""
    h = height(a, kind)
    assert h >= 0
    assert height([t * x for x in a], kind) == pytest.approx(t * h, rel=1e-8)
    assert height([-x for x in a], kind) == pytest.approx(h, rel=1e-9)
    alt = [x if k % 2 == 0 else -x for k, x in enumerate(a)]
    assert height(alt, kind) == pytest.approx(h, rel=1e-8)
    if abs(a[0]) > 1e-3:
        assert height(a[::-1], kind) == pytest.approx(h, rel=1e-7)


@settings(max_examples=40, deadline=None)
@given(coeff_lists)
def test_height_ordering(c):
    naive = height(c, "naive")
    assert naive <= height(c, "length") <= (len(c)) * naive
    m = height(c, "mahler")
    assert max(abs(a) / math.comb(len(c) - 1, k) for k, a in enumerate(c)) <= m * (1 + 1e-9)
    assert m <= math.sqrt(sum(a * a for a in c)) * (1 + 1e-9)


def test_mahler_high_precision_agrees():
    for c in ([3, -7, 0, 2, 5], [1, 1, 1, 1], [-6, 11, -6, 1]):
        assert float(mahler_measure_mp(c)) == pytest.approx(mahler_measure(c), rel=1e-10)


# ---------------------------------------------------------- discriminant

@pytest.mark.parametrize("coeffs,expected", [
    ((-1, 0, 1), 4),              # x^2 - 1
    ((1, 0, 1), -4),              # x^2 + 1
    ((-1, 0, 0, 0, 1), -256),     # x^4 - 1
    ((1, 1, 0, 1), -31),          # x^3 + x + 1
    ((0, 0, 1), 0),               # x^2
])
def test_discriminant_examples(coeffs, expected):
    assert discriminant_det(coeffs) == expected
    assert discriminant_prs(coeffs) == expected


def test_discriminant_quadratic_and_cubic_formulas():
    rng = random.Random(3)
    for _ in range(300):
        a0, a1, a2 = (rng.randint(-30, 30) for _ in range(3))
        if a2:
            assert discriminant_prs((a0, a1, a2)) == a1 * a1 - 4 * a0 * a2
        d, c, b, a = (rng.randint(-20, 20) for _ in range(4))
        if a:
            exp = b * b * c * c - 4 * a * c ** 3 - 4 * b ** 3 * d - 27 * a * a * d * d + 18 * a * b * c * d
            assert discriminant_det((d, c, b, a)) == exp


def test_discriminant_rejects_bad_input():
    with pytest.raises(DegenerateInputError):
        discriminant_det((1, 2, 0))
    with pytest.raises(UnsupportedDegreeError):
        discriminant_prs((3,))


def test_discriminant_big_integers():
    c = [10 ** 30 + 7, -(10 ** 25), 3, 10 ** 20 + 1]
    assert discriminant_det(c) == discriminant_prs(c)


@settings(max_examples=80, deadline=None)
@given(coeff_lists, st.integers(2, 5))
def test_discriminant_homogeneity_and_symmetries(c, t):
    n = len(c) - 1
    d = discriminant_prs(c)
    assert discriminant_prs([t * a for a in c]) == t ** (2 * n - 2) * d
    assert discriminant_prs([-a for a in c]) == d
    assert discriminant_prs([a if k % 2 == 0 else -a for k, a in enumerate(c)]) == d
    if c[0] != 0:
        assert discriminant_prs(c[::-1]) == d
    assert discriminant_det(c) == d
    assert (d == 0) == has_repeated_root(c)


def test_resultant_matches_bareiss():
    rng = random.Random(5)
    for _ in range(100):
        a = [rng.randint(-9, 9) for _ in range(rng.randint(2, 5))]
        b = [rng.randint(-9, 9) for _ in range(rng.randint(2, 4))]
        a[-1] = a[-1] or 1
        b[-1] = b[-1] or 1
        assert resultant(a, b) == bareiss_det(sylvester_matrix(a, b))


def test_discriminant_root_formula():
    rng = np.random.default_rng(2)
    for _ in range(200):
        n = int(rng.integers(2, 6))
        c = [int(x) for x in rng.integers(-20, 21, n + 1)]
        c[-1] = c[-1] or 3
        d = discriminant_prs(c)
        if d:
            approx = discriminant_from_roots(c[-1], roots_numeric(c))
            assert abs(approx - d) <= 1e-6 * abs(d)


# ----------------------------------------------------------------- roots

def test_roots_round_trip():
    rng = np.random.default_rng(0)
    for n in range(2, 8):
        z = rng.uniform(-3, 3, n)
        c = coeffs_from_roots(2.5, z)
        r = np.sort_complex(roots_numeric(list(c)))
        np.testing.assert_allclose(np.sort(r.real), np.sort(z), atol=1e-8)


def test_roots_degenerate():
    with pytest.raises(DegenerateInputError):
        roots_numeric([1, 2, 0])
    with pytest.raises(DegenerateInputError):
        coeffs_from_roots(0, [1.0])


def test_roots_multiple_root_escalates():
    # (x - 1)^6: double precision cannot reach the backward-error target unaided
    c = [int(math.comb(6, k) * (-1) ** (6 - k)) for k in range(7)]
    r = roots_numeric(c, tol=1e-12)
    assert np.allclose(r, 1.0, atol=1e-2)


# ------------------------------------------------------------- signature

@pytest.mark.parametrize("coeffs,s", [
    ((1, 0, 1), 1),               # x^2 + 1
    ((-1, 0, 1), 0),              # x^2 - 1
    ((1, 0, 2, 0, 1), 2),         # (x^2 + 1)^2, multiplicity counted
    ((-1, 0, 0, 0, 1), 1),        # x^4 - 1
    ((0, 0, 1), 0),               # x^2
    ((1, 0, 0, 1), 1),            # x^3 + 1
    ((-6, 11, -6, 1), 0),         # (x-1)(x-2)(x-3)
])
def test_signature_examples(coeffs, s):
    assert signature(coeffs) == s


@settings(max_examples=60, deadline=None)
@given(coeff_lists)
def test_signature_against_numeric_roots(c):
    n = len(c) - 1
    s = signature(c)
    assert 0 <= s <= n // 2
    if discriminant_prs(c) != 0:
        assert (-1) ** s == (1 if discriminant_prs(c) > 0 else -1)
        r = roots_numeric(c)
        assert int(np.sum(np.abs(r.imag) > 1e-7 * np.maximum(1, np.abs(r)))) == 2 * s


def test_sturm_count_with_multiplicities():
    # (x-1)^2 (x+2) (x^2+1)
    p = intpoly.mul(intpoly.mul([1, -2, 1], [2, 1]), [1, 0, 1])
    assert intpoly.count_distinct_real_roots(p) == 2
    assert signature(p) == 1


# -------------------------------------------------------------- jacobian

def test_jacobian_identity_small():
    rng = np.random.default_rng(1)
    for n in (2, 3, 4, 5):
        for _ in range(20):
            b = rng.uniform(0.5, 2)
            z = rng.uniform(-2, 2, n)
            assert jacobian_fd(b, z) == pytest.approx(jacobian_formula(b, z), rel=1e-5)


def test_jacobian_degenerate():
    with pytest.raises(DegenerateInputError):
        jacobian_formula(0, [1.0, 2.0])
