"""Quantitative checks that join census counts, volume estimates and lambda_0.

* :func:`boundedness_report`: does |N_s(Q, delta Q^(2n-2)) - Q^(n+1) f_s(delta)| / Q^n stay
  bounded as Q grows?
* :func:`power_law_report`: does f_0(delta) follow lambda_0 delta^((n+2)/(2n)) for small
  delta, and do census counts at X = Q^(2n-2-2v) grow like lambda_0 Q^(n+1-(n+2)v/n)?
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence

import numpy as np
from scipy import integrate

from .errors import DomainError


@dataclass
class PowerLawFit:
    exponent: float
    prefactor: float
    exponent_stderr: float
    prefactor_stderr: float
    points_used: int

    def to_json(self):
        return asdict(self)


def fit_power_law(points, exponent=None):
    """Weighted least squares of log(value) on log(delta).

    ``points`` are ``(delta, value, stderr)`` triples; weights are
    ``(value/stderr)^2``.  If any stderr is zero the fit is unweighted and
    standard errors come from the residuals.  With ``exponent`` given only
    the prefactor is fitted.
    """
    pts = [(float(d), float(v), float(e)) for d, v, e in points]
    if len(pts) < 3:
        raise DomainError(f"power-law fit needs at least 3 points, got {len(pts)}")
    if any(v <= 0 or d <= 0 for d, v, _ in pts):
        raise DomainError("power-law fit needs positive deltas and values")
    x = np.log([d for d, _, _ in pts])
    y = np.log([v for _, v, _ in pts])
    rel = np.array([e / v for _, v, e in pts])
    known = bool(np.all(rel > 0))
    w = 1.0 / rel ** 2 if known else np.ones(len(pts))
    if exponent is None:
        A = np.column_stack([np.ones_like(x), x])
        rhs = y
    else:
        A = np.ones((len(x), 1))
        rhs = y - exponent * x
    AtW = A.T * w
    cov = np.linalg.inv(AtW @ A)
    beta = cov @ (AtW @ rhs)
    if not known:
        dof = max(len(x) - A.shape[1], 1)
        resid = rhs - A @ beta
        cov = cov * float(resid @ resid) / dof
    pref = math.exp(beta[0])
    return PowerLawFit(
        exponent=float(beta[1]) if exponent is None else float(exponent),
        prefactor=pref,
        exponent_stderr=math.sqrt(max(cov[1, 1], 0.0)) if exponent is None else 0.0,
        prefactor_stderr=pref * math.sqrt(max(cov[0, 0], 0.0)),
        points_used=len(pts),
    )


# ------------------------------------------------------ exact thresholds

def _exact(delta):
    if isinstance(delta, (int, Fraction)):
        return Fraction(delta)
    if isinstance(delta, str):
        return Fraction(delta)
    return Fraction(repr(float(delta)))


def threshold_for(delta, Q, n):
    """floor(delta * Q^(2n-2)); equivalent to delta Q^(2n-2) for integer discriminants."""
    d = _exact(delta)
    if d < 0:
        raise DomainError("delta must be nonnegative")
    return math.floor(d * Q ** (2 * n - 2))


def _iroot(x, k):
    """floor(x^(1/k)) for integers x >= 0, k >= 1."""
    if x < 2 or k == 1:
        return x
    r = int(round(x ** (1.0 / k))) if x.bit_length() < 1000 else 1 << (x.bit_length() // k + 1)
    while r ** k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def power_threshold(Q, n, v):
    """floor(Q^(2n-2-2v)) computed exactly for rational v."""
    v = _exact(v)
    e = (2 * n - 2) - 2 * v
    if e < 0:
        raise DomainError("v too large: negative exponent")
    return _iroot(Q ** e.numerator, e.denominator)


def exponent_range(n, eps):
    return eps, (1 - eps) * n / (n + 2)


def census_count(table, s, X):
    """N_s(Q, X) from a census table; DomainError if X is not one of its thresholds."""
    try:
        j = table.spec.thresholds.index(int(X))
    except ValueError:
        raise DomainError(f"census for Q={table.spec.Q} has no threshold X={X}; "
                          f"available: {table.spec.thresholds}") from None
    return table.N(s, j)


# --------------------------------------------------------- boundedness

def boundedness_report(n, s, delta, census, estimate, ratio_limit=3.0, height="naive"):
    """Scaled deviations r(Q) = |N_s - Q^(n+1) f| / Q^n and a boundedness verdict.

    ``census`` maps Q to either a CensusTable (queried at the exact threshold)
    or a count already taken at that threshold.  ``estimate`` carries
    ``mean`` and ``stderr`` of f_s(delta).  The verdict passes when the
    largest r among the two biggest Q is at most ``ratio_limit`` times the
    median r over all Q.
    """
    if not census:
        raise DomainError("boundedness_report needs census counts")
    if getattr(estimate, "delta", None) not in (None, 0.0) and \
            not math.isclose(float(estimate.delta), float(_exact(delta)), rel_tol=1e-12):
        raise DomainError(f"volume estimate is at delta={estimate.delta}, census at {delta}")
    if getattr(estimate, "n", n) not in (0, n):
        raise DomainError("volume estimate and census have different degrees")
    f, fe = float(estimate.mean), float(estimate.stderr)
    rows = []
    for Q in sorted(census):
        X = threshold_for(delta, Q, n)
        c = census[Q]
        N = census_count(c, s, X) if hasattr(c, "spec") else int(c)
        if hasattr(c, "spec") and (c.spec.n != n or c.spec.height.value != str(height)):
            raise DomainError(f"census for Q={Q} does not match n={n}, height={height}")
        model = Q ** (n + 1) * f
        rows.append({"Q": Q, "X": str(X), "N": N, "model": model,
                     "r": abs(N - model) / Q ** n, "band": Q * fe})
    r = [row["r"] for row in rows]
    med = float(np.median(r))
    top = max(r[-2:])
    return {
        "n": n, "s": s, "delta": str(_exact(delta)), "height": str(height),
        "f": f, "f_stderr": fe, "rows": rows, "median_r": med, "max_r_top2": top,
        "ratio_limit": ratio_limit,
        "bounded": top <= ratio_limit * med if med > 0 else top == 0,
        "outside_proven_range": n < 3,
    }


# ----------------------------------------------------------- power law

def power_law_report(n, estimates, lambda0_value, census=None, lambda0_err=0.0,
                     height="naive", exponent_tol=0.05, prefactor_tol=0.2):
    """Small-delta power law of f_0 against lambda_0, plus counts at thresholds Q^(2n-2-2v).

    ``estimates`` are f_0 estimates on a delta grid.  ``census`` optionally
    maps v to {Q: #P_n^(0)(Q, v)}.
    """
    if not estimates or lambda0_value is None:
        raise DomainError("power_law_report needs volume estimates and lambda_0")
    target = (n + 2) / (2 * n)
    pts = [(e.delta, e.mean, e.stderr) for e in estimates if e.mean > 0]
    free = fit_power_law(pts)
    fixed = fit_power_law(pts, exponent=target)
    smallest = min(estimates, key=lambda e: e.delta)
    report = {
        "n": n, "height": str(height),
        "exponent_target": target,
        "fit": free.to_json(),
        "fixed_exponent_fit": fixed.to_json(),
        "exponent_deviation": free.exponent - target,
        "exponent_pass": abs(free.exponent - target) <= exponent_tol,
        "lambda0": lambda0_value, "lambda0_err": lambda0_err,
        "prefactor_rel_deviation": fixed.prefactor / lambda0_value - 1.0,
        "free_prefactor_rel_deviation": free.prefactor / lambda0_value - 1.0,
        "prefactor_pass": abs(fixed.prefactor / lambda0_value - 1.0) <= prefactor_tol,
        "smallest_delta_ratio": smallest.mean / smallest.delta ** target / lambda0_value,
        "plot": [{"delta": e.delta, "f": e.mean, "stderr": e.stderr,
                  "model": lambda0_value * e.delta ** target} for e in estimates],
    }
    if census:
        cor = []
        for v, counts in sorted(census.items(), key=lambda kv: float(kv[0])):
            vv = float(_exact(v))
            expo = n + 1 - (n + 2) * vv / n
            rows = [{"Q": Q, "count": int(c), "model": lambda0_value * Q ** expo,
                     "rel_deviation": int(c) / (lambda0_value * Q ** expo) - 1.0}
                    for Q, c in sorted(counts.items())]
            entry = {"v": str(v), "exponent_target": expo, "rows": rows}
            pos = [(Q, c, math.sqrt(c)) for Q, c in sorted(counts.items()) if c > 0]
            if len(pos) >= 3:
                fit = fit_power_law(pos)
                entry["fit"] = fit.to_json()
                entry["exponent_deviation"] = fit.exponent - expo
            cor.append(entry)
        report["counts"] = cor
    return report


# ------------------------------------------------- quadrature f oracle

def f_n2_quadrature(s, delta, epsrel=1e-10):
    """f_s(delta) for n = 2, naive height, by one-dimensional quadrature.

    With p = 4 a_0 a_2 the a_1-measure is explicit; the product a_0 a_2 = +-u
    of two uniforms on [0, 1] has density -log(u), and the four sign
    quadrants pair up.
    """
    if delta < 0:
        raise DomainError("delta must be nonnegative")
    if s not in (0, 1):
        raise DomainError("n=2 signatures are 0 and 1")

    def m(x):
        return 2.0 * min(1.0, math.sqrt(x)) if x > 0 else 0.0

    def g(p):
        if s == 0:
            return m(p + delta) - m(p)
        return m(p) - m(p - delta)

    def h(u):
        return -math.log(u) * (g(4 * u) + g(-4 * u)) if u > 0 else 0.0

    pts = sorted({x for x in (delta / 4, 0.25, (1 - delta) / 4, (1 + delta) / 4, (delta - 1) / 4)
                  if 0 < x < 1})
    cuts = [0.0] + pts + [1.0]
    total = sum(integrate.quad(h, a, b, epsrel=epsrel, epsabs=0.0, limit=200)[0]
                for a, b in zip(cuts[:-1], cuts[1:]))
    return 2.0 * total


def plot_rows_boundedness(report):
    return [{"Q": r["Q"], "N": r["N"], "model": r["model"], "r": r["r"], "band": r["band"]}
            for r in report["rows"]]


def plot_rows_power_law(report):
    return list(report["plot"])
