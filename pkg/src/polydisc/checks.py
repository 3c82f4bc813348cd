"""Fast self-checks of the exact and numerical machinery.

Each check returns a dict with at least ``name`` and ``pass``.  They are
exposed through ``polydisc check`` and reused by the test-suite.
"""
from __future__ import annotations

import logging
import time

import numpy as np

from . import asymptotic, census, harness, volume
from .errors import DomainError
from .polynomial import (discriminant_det, discriminant_from_roots,
                         discriminant_prs, jacobian_fd, jacobian_formula, roots_numeric)

log = logging.getLogger(__name__)


def _root_formula_mp(coeffs, dps=60):
    import mpmath

    with mpmath.workdps(dps):
        roots = mpmath.polyroots([mpmath.mpf(a) for a in coeffs[::-1]], maxsteps=600,
                                 extraprec=4 * dps)
        n = len(roots)
        val = mpmath.mpf(coeffs[-1]) ** (2 * n - 2)
        for i in range(n):
            for j in range(i + 1, n):
                val *= (roots[i] - roots[j]) ** 2
        return complex(val)


def discriminant_oracle(samples=10_000, seed=0, max_coeff=100, rel_tol=1e-6):
    """Determinant and remainder-sequence discriminants agree and match the root formula.

    The root formula is evaluated with double-precision roots first; a
    polynomial whose roots are too ill-conditioned for double precision
    is re-evaluated with 60-digit roots.
    """
    rng = np.random.default_rng(seed)
    mismatches, formula_fail, escalated, nonzero = [], [], 0, 0
    for _ in range(samples):
        n = int(rng.integers(2, 7))
        c = [int(x) for x in rng.integers(-max_coeff, max_coeff + 1, size=n + 1)]
        if c[-1] == 0:
            c[-1] = int(rng.choice([-1, 1]) * rng.integers(1, max_coeff + 1))
        d1, d2 = discriminant_det(c), discriminant_prs(c)
        if d1 != d2:
            mismatches.append(c)
            continue
        if d1 == 0:
            continue
        nonzero += 1
        approx = discriminant_from_roots(c[-1], roots_numeric(c))
        if abs(approx - d1) > rel_tol * abs(d1):
            escalated += 1
            approx = _root_formula_mp(c)
            if abs(approx - d1) > rel_tol * abs(d1):
                formula_fail.append(c)
    return {"name": "discriminant-oracle", "samples": samples, "nonzero": nonzero,
            "det_prs_mismatches": len(mismatches), "root_formula_failures": len(formula_fail),
            "root_formula_escalations": escalated,
            "pass": not mismatches and not formula_fail}


def hand_census():
    t = census.run_census(census.CensusSpec(2, 1, "naive", (4,)))
    ok = t.N(0) == 8 and t.N(1) == 6
    return {"name": "hand-census", "N0": t.N(0), "N1": t.N(1), "pass": ok}


def total_identity(ns=(2, 3, 4), Qs=(1, 2, 5, 10)):
    rows = []
    for n in ns:
        for Q in Qs:
            t = census.run_census(census.CensusSpec(n, Q, "naive", (census.crude_discriminant_bound(n, Q),)))
            col = sum(t.column().values())
            rows.append({"n": n, "Q": Q, "total": t.total, "column_sum": col,
                         "expected": census.naive_total(n, Q)})
    ok = all(r["total"] == r["expected"] == r["column_sum"] for r in rows)
    return {"name": "total-identity", "rows": rows, "pass": ok}


def jacobian_identity(samples=1000, seed=0, rel_tol=1e-5):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        n = int(rng.integers(2, 6))
        b = float(rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0]))
        z = rng.uniform(-2.0, 2.0, n)
        exact = jacobian_formula(b, z)
        fd = jacobian_fd(b, z)
        worst = max(worst, abs(fd - exact) / exact)
    return {"name": "jacobian-identity", "samples": samples, "max_rel_err": worst,
            "pass": worst < rel_tol}


def selberg_crosscheck(rel_tol=1e-3):
    rows = []
    for params in ((1.0, 1.0, 1.0), (0.5, 0.5, -0.25)):
        closed = asymptotic.selberg_closed_form(2, *params)
        quad = asymptotic.selberg_quadrature(2, *params)
        rows.append({"params": params, "closed_form": closed, "quadrature": quad,
                     "rel_err": abs(closed - quad) / abs(quad)})
    rejected = []
    for bad in ((2, 1.0, 1.0, -0.6), (2, -0.5, 1.0, 0.1), (3, 0.6, 0.6, -0.35)):
        try:
            asymptotic.selberg_closed_form(*bad)
            rejected.append(False)
        except DomainError:
            rejected.append(True)
    ok = all(r["rel_err"] < rel_tol for r in rows) and all(rejected)
    return {"name": "selberg-crosscheck", "rows": rows, "inadmissible_rejected": rejected,
            "pass": ok}


def reduction_identity():
    one = asymptotic.scaling_reduction_check(1, 2, -1.0, 0.5, kappa=1.0)
    two = asymptotic.scaling_reduction_check(2, 2, -2.0, 0.5, kappa=1.0)
    kap = asymptotic.scaling_reduction_check(1, 2, -1.0, 0.5, kappa=16.0)
    dt = asymptotic.scaling_reduction_check(*asymptotic.i3_reduction_parameters(2)[:4],
                                            kappa=1.0, f_spec="delta_tilde")
    ok = (abs(one["cone_direct"] - 1.5) < 1e-9 and abs(one["cone_formula"] - 1.5) < 1e-12
          and two["cone_rel_diff"] < 1e-3 and kap["kappa_ratio_rel_diff"] < 1e-6
          and abs(kap["kappa_ratio_expected"] - 16 ** (1 / 3)) < 1e-12)
    return {"name": "reduction-identity", "m1": one, "m2": two, "kappa16": kap,
            "delta_tilde_n2": dt, "normalization": dt["consistent_normalization"], "pass": ok}


def lambda0_n2_prefactor(deltas=(1e-3, 1e-4, 1e-5), rel_tol=0.05):
    lam = asymptotic.lambda0(2).value
    pts = [(d, harness.f_n2_quadrature(0, d), 0.0) for d in deltas]
    fit = harness.fit_power_law(pts, exponent=1.0)
    dev = fit.prefactor / lam - 1.0
    return {"name": "lambda0-n2-prefactor", "lambda0": lam, "fitted_prefactor": fit.prefactor,
            "rel_deviation": dev, "pass": abs(dev) <= rel_tol}


def inversion_symmetry(samples=200_000, seed=0):
    rows = [volume.inversion_symmetry_check(n, 0.1, samples, seed) for n in (2, 3)]
    return {"name": "inversion-symmetry", "rows": rows, "pass": all(r["pass"] for r in rows)}


QUICK = {
    "hand-census": hand_census,
    "discriminant-oracle": lambda: discriminant_oracle(samples=500),
    "jacobian-identity": lambda: jacobian_identity(samples=200),
    "selberg-crosscheck": selberg_crosscheck,
    "reduction-identity": reduction_identity,
    "lambda0-n2-prefactor": lambda0_n2_prefactor,
    "total-identity": lambda: total_identity(Qs=(1, 2)),
    "inversion-symmetry": lambda: inversion_symmetry(samples=50_000),
}

FULL = {
    "hand-census": hand_census,
    "discriminant-oracle": discriminant_oracle,
    "jacobian-identity": jacobian_identity,
    "selberg-crosscheck": selberg_crosscheck,
    "reduction-identity": reduction_identity,
    "lambda0-n2-prefactor": lambda0_n2_prefactor,
    "total-identity": total_identity,
    "inversion-symmetry": inversion_symmetry,
}


def run_checks(names=None, full=False):
    table = FULL if full else QUICK
    names = list(names or table)
    unknown = [n for n in names if n not in table]
    if unknown:
        raise DomainError(f"unknown check(s) {unknown}; available: {sorted(table)}")
    out = []
    for name in names:
        t0 = time.perf_counter()
        out.append(table[name]())
        log.info("check %s finished in %.2fs", name, time.perf_counter() - t0)
    return out
