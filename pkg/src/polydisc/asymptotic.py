"""The small-discriminant constant lambda_0 and the integrals it is built from.

With a = 2/n and m = n - 1 root differences,

    lambda_0 = 4/(n+1)! * 2n(n+1)/(n+2) * int_{-1}^{1} Kt(tau)^a dtau * I4,

    I4 = int_{[-1,1]^{n-2}} prod |xi_i|^-a (1 - xi_i)^-a prod_{i<j} |xi_i - xi_j|^-a dxi,

where Kt(tau) is the reciprocal height of (x - tau)^n.  The factor 2n(n+1)/(n+2)
collects the 2m congruent cones {+-theta_j > |theta_i|} that tile R^m, each
contributing the single-cone value of the homogeneous reduction implemented
in :func:`cone_reduction_rhs`.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate, special

from .errors import DomainError
from .polynomial import HeightKind

log = logging.getLogger(__name__)

METHODS = ("adaptive-grid", "mc-importance")


@dataclass
class QuadratureResult:
    value: float
    error_estimate: float
    method: str
    evaluations: int
    target_met: bool = True
    components: dict = field(default_factory=dict)

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise DomainError(f"non-finite quadrature value {self.value}")
        self.error_estimate = abs(float(self.error_estimate))

    def to_json(self):
        return asdict(self)


class PrecisionWarning(UserWarning):
    """Requested accuracy not reached within the evaluation budget."""


# ------------------------------------------------------------ integrands

def delta_tilde(theta):
    """prod theta_k^2 * prod_{i<j} (theta_i - theta_j)^2; vectorised over leading axes."""
    th = np.asarray(theta, dtype=float)
    out = np.prod(th * th, axis=-1)
    k = th.shape[-1]
    for i in range(k):
        for j in range(i + 1, k):
            d = th[..., i] - th[..., j]
            out = out * d * d
    return out


def _tilde_height(tau, n, kind):
    t = np.abs(np.asarray(tau, dtype=float))
    if kind is HeightKind.NAIVE:
        return np.max([math.comb(n, k) * t ** (n - k) for k in range(n + 1)], axis=0)
    if kind is HeightKind.LENGTH:
        return (1.0 + t) ** n
    return np.maximum(1.0, t) ** n


def k_tilde(tau, n, kind=HeightKind.NAIVE):
    """1 / h((x - tau)^n)."""
    return 1.0 / _tilde_height(tau, n, HeightKind.parse(kind))


def k_tilde_breakpoints(n, kind=HeightKind.NAIVE, lo=0.0, hi=1.0, tol=1e-12):
    """Points of (lo, hi) where the maximising coefficient index of (x - t)^n changes."""
    if HeightKind.parse(kind) is not HeightKind.NAIVE:
        return []

    def active(t):
        vals = [math.comb(n, k) * t ** (n - k) for k in range(n + 1)]
        return int(np.argmax(vals))

    grid = np.linspace(lo, hi, 4097)
    idx = [active(t) for t in grid]
    out = []
    for a, b, ia, ib in zip(grid[:-1], grid[1:], idx[:-1], idx[1:]):
        if ia == ib:
            continue
        while b - a > tol:
            mid = 0.5 * (a + b)
            if active(mid) == ia:
                a = mid
            else:
                b = mid
        out.append(float(0.5 * (a + b)))
    return out


def center_change(tau, theta, rho):
    """Root vector (tau, tau + rho*theta_1, ..., tau + rho*theta_{n-1})."""
    theta = np.asarray(theta, dtype=float)
    tau = np.asarray(tau, dtype=float)
    return np.concatenate([tau[..., None], tau[..., None] + rho * theta], axis=-1)


def center_change_jacobian_fd(tau, theta, rho, step=1e-6):
    """|det d alpha / d(tau, theta)| by central differences."""
    x0 = np.concatenate([[tau], np.asarray(theta, dtype=float)])
    n = len(x0)
    J = np.empty((n, n))
    for k in range(n):
        e = np.zeros(n)
        e[k] = step
        J[:, k] = (center_change((x0 + e)[0], (x0 + e)[1:], rho)
                   - center_change((x0 - e)[0], (x0 - e)[1:], rho)) / (2 * step)
    return abs(np.linalg.det(J))


def i3_integrand(theta, n, K):
    """sqrt(Dt) * min(Dt^(-1/(2n-2)), K)^(n+1) over the theta variables."""
    dt = delta_tilde(theta)
    with np.errstate(divide="ignore"):
        psi = np.minimum(dt ** (-1.0 / (2 * n - 2)), K)
    return np.sqrt(dt) * psi ** (n + 1)


def i1_integrand(tau, theta, rho, n, kind=HeightKind.NAIVE):
    """Integrand of the rescaled root-space integral at scale rho."""
    from .volume import height_rows, _monic_coeffs

    alpha = np.atleast_2d(center_change(tau, theta, rho))
    K = 1.0 / height_rows(_monic_coeffs(alpha), kind)
    return i3_integrand(theta, n, K.reshape(np.shape(tau)))


# ---------------------------------------------------- 1-D singular quad

def singquad(sings, lo, hi, extra=None, epsrel=1e-11, epsabs=1e-13):
    """int_lo^hi extra(x) * prod |x - c|^p for (c, p) in ``sings``.

    The interval is split at every singular point inside it so each piece
    carries at most algebraic endpoint singularities, which QUADPACK's
    algebraic weight handles exactly.
    """
    cuts = sorted({lo, hi, *[c for c, _ in sings if lo < c < hi]})
    total = err = 0.0
    evals = 0
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b <= a:
            continue
        pa = sum(p for c, p in sings if c == a)
        pb = sum(p for c, p in sings if c == b)
        rest = [(c, p) for c, p in sings if c != a and c != b]

        def f(x, rest=rest):
            v = math.prod(abs(x - c) ** p for c, p in rest)
            return v * extra(x) if extra is not None else v

        if pa == 0 and pb == 0:
            r, e, info = integrate.quad(f, a, b, limit=400, epsabs=epsabs, epsrel=epsrel,
                                        full_output=1)[:3]
        else:
            r, e, info = integrate.quad(f, a, b, weight="alg", wvar=(pa, pb), limit=400,
                                        epsabs=epsabs, epsrel=epsrel, full_output=1)[:3]
        total += r
        err += e
        evals += info["neval"]
    return total, err, evals


def outer_quad(sings, inner, lo, hi, epsrel=1e-10):
    """Outer level of a nested singular integral.

    ``inner(x)`` may itself be log-singular where ``x`` meets a point of
    ``sings``.  QAGS extrapolation copes with that and, unlike the
    algebraic-weight rule, never evaluates ``inner`` at an endpoint.
    """
    cuts = sorted({lo, hi, *[c for c, _ in sings if lo < c < hi]})

    def f(x):
        return math.prod(abs(x - c) ** p for c, p in sings) * inner(x)

    total = err = 0.0
    evals = 0
    for a, b in zip(cuts[:-1], cuts[1:]):
        r, e, info = integrate.quad(f, a, b, epsrel=epsrel, epsabs=0.0, limit=400,
                                    full_output=1)[:3]
        total += r
        err += e
        evals += info["neval"]
    return total, err, evals


# ------------------------------------------------------------------ I4

def _i4_adaptive(n, target_rel_err):
    a = 2.0 / n
    base = [(0.0, -a), (1.0, -a)]
    if n == 3:
        v, e, ev = singquad(base, -1.0, 1.0, epsrel=target_rel_err * 1e-2)
        return v, e, ev
    if n == 4:
        count = [0]

        def inner(x1):
            v, _, ev = singquad(base + [(x1, -a)], -1.0, 1.0, epsrel=target_rel_err * 1e-2)
            count[0] += ev
            return v

        v, e, ev = outer_quad(base, inner, -1.0, 1.0, epsrel=target_rel_err * 1e-2)
        return v, e, ev + count[0]
    raise DomainError(f"adaptive-grid I4 supports n in {{3, 4}}, got n={n}")


def _negative_side_mass(a):
    return singquad([(0.0, -a), (-1.0, -a)], 0.0, 1.0)[0]


def sample_i4_coordinate(rng, a, size):
    """Draws from the density proportional to |x|^-a (1-x)^-a on [-1, 1]."""
    zpos = math.exp(special.betaln(1 - a, 1 - a))
    zneg = _negative_side_mass(a)
    out = np.empty(size)
    neg = rng.random(size) < zneg / (zpos + zneg)
    npos = int((~neg).sum())
    out[~neg] = rng.beta(1 - a, 1 - a, npos)
    need = int(neg.sum())
    vals = []
    while need > 0:
        u = rng.beta(1 - a, 1.0, max(2 * need, 64))
        keep = u[rng.random(len(u)) < (1.0 + u) ** (-a)]
        vals.append(keep[:need])
        need -= len(keep[:need])
    if vals:
        out[neg] = -np.concatenate(vals)
    return out, zpos + zneg


def _i4_mc(n, target_rel_err, samples, seed, groups=32, budget=10 ** 9, chunk=1 << 18):
    from .volume import stream

    a = 2.0 / n
    m = n - 2
    rng = stream(seed, 0)
    group_sum = np.zeros(groups)
    group_cnt = np.zeros(groups)
    drawn = 0
    target = samples if samples else chunk * groups
    g = 0
    while True:
        while drawn < target:
            size = min(chunk, target - drawn)
            xi = np.empty((size, m))
            Z = 1.0
            for k in range(m):
                xi[:, k], z = sample_i4_coordinate(rng, a, size)
                Z *= z
            w = np.full(size, Z)
            for i in range(m):
                for j in range(i + 1, m):
                    w *= np.abs(xi[:, i] - xi[:, j]) ** (-a)
            # round-robin assignment keeps group sizes balanced
            idx = (np.arange(size) + g) % groups
            np.add.at(group_sum, idx, w)
            np.add.at(group_cnt, idx, 1)
            g = (g + size) % groups
            drawn += size
        means = group_sum / group_cnt
        value = float(np.median(means))
        err = 1.2533 * float(np.std(means, ddof=1)) / math.sqrt(groups)
        if samples or err <= target_rel_err * value or drawn >= budget:
            return value, err, drawn
        target = min(budget, 4 * drawn)


def integrate_I4(n, target_rel_err=1e-6, method=None, samples=None, seed=0, budget=10 ** 9):
    """I4 for degree n.

    ``method`` is ``"adaptive-grid"`` (n = 3, 4) or ``"mc-importance"``; the
    default picks the deterministic method where it exists.  With
    ``samples`` given the MC run has that fixed size; otherwise it grows
    until the target is met or ``budget`` samples are used.
    """
    if n < 2:
        raise DomainError("I4 requires n >= 2")
    if target_rel_err <= 0:
        raise DomainError("target_rel_err must be positive")
    if n == 2:
        return QuadratureResult(1.0, 0.0, "adaptive-grid", 0)
    method = method or ("adaptive-grid" if n <= 4 else "mc-importance")
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}; choose from {METHODS}")
    if method == "adaptive-grid":
        v, e, ev = _i4_adaptive(n, target_rel_err)
    else:
        if n == 3:
            raise DomainError("mc-importance needs n >= 4 (the n=3 integrand has no pair factor)")
        v, e, ev = _i4_mc(n, target_rel_err, samples, seed, budget=budget)
    met = e <= target_rel_err * abs(v)
    if not met:
        warnings.warn(f"I4(n={n}) reached rel. error {e / v:.2e} > target {target_rel_err:.1e}",
                      PrecisionWarning, stacklevel=2)
    return QuadratureResult(v, e, method, int(ev), met)


# ------------------------------------------------------------- Selberg

def selberg_check(m, alpha, beta, gamma):
    """Raise DomainError naming the first violated convergence inequality."""
    if m < 1 or int(m) != m:
        raise DomainError(f"m must be a positive integer, got {m}")
    if not alpha > 0:
        raise DomainError(f"Re(alpha) > 0 violated: alpha={alpha}")
    if not beta > 0:
        raise DomainError(f"Re(beta) > 0 violated: beta={beta}")
    bounds = {"1/m": 1.0 / m}
    if m > 1:
        bounds["alpha/(m-1)"] = alpha / (m - 1)
        bounds["beta/(m-1)"] = beta / (m - 1)
    name, low = min(bounds.items(), key=lambda kv: kv[1])
    if not gamma > -low:
        raise DomainError(f"gamma > -min{{1/m, alpha/(m-1), beta/(m-1)}} violated: "
                          f"gamma={gamma} <= -{name}={-low}")


def selberg_closed_form(m, alpha, beta, gamma):
    """S_m(alpha, beta, gamma) from the Gamma-product formula, in log space."""
    selberg_check(m, alpha, beta, gamma)
    s = 0.0
    for j in range(m):
        s += (special.gammaln(alpha + j * gamma) + special.gammaln(beta + j * gamma)
              + special.gammaln(1 + (j + 1) * gamma)
              - special.gammaln(alpha + beta + (m + j - 1) * gamma) - special.gammaln(1 + gamma))
    return math.exp(s)


def selberg_quadrature(m, alpha, beta, gamma, epsrel=1e-8):
    """Direct evaluation of the defining integral over [0,1]^m for m in {1, 2}."""
    selberg_check(m, alpha, beta, gamma)
    base = [(0.0, alpha - 1), (1.0, beta - 1)]
    if m == 1:
        return singquad(base, 0.0, 1.0, epsrel=epsrel)[0]
    if m == 2:
        inner = lambda t1: singquad(base + [(t1, 2 * gamma)], 0.0, 1.0, epsrel=epsrel)[0]
        return outer_quad(base, inner, 0.0, 1.0, epsrel=epsrel)[0]
    raise DomainError("direct Selberg quadrature implemented for m <= 2")


def i4_selberg_bound(n):
    """2^(n-2) * S_{n-2}((n-2)/n, (n-2)/n, -1/n), an upper bound for I4."""
    if n < 4:
        raise DomainError(f"the Selberg bound needs n >= 4, got n={n}")
    m = n - 2
    ab = (n - 2) / n
    return 2.0 ** m * selberg_closed_form(m, ab, ab, -1.0 / n)


# ------------------------------------------------------------ lambda_0

def cone_count(n):
    """Number of cones {+-theta_j > |theta_i|} tiling R^(n-1)."""
    return 2 * (n - 1)


def k_tilde_integral(n, kind=HeightKind.NAIVE, epsrel=1e-12):
    """int_{-1}^{1} Kt(tau)^(2/n) dtau, split at the breakpoints of Kt."""
    kind = HeightKind.parse(kind)
    a = 2.0 / n
    pts = [0.0] + k_tilde_breakpoints(n, kind) + [1.0]
    total = err = 0.0
    evals = 0
    for lo, hi in zip(pts[:-1], pts[1:]):
        r, e, info = integrate.quad(lambda t: float(k_tilde(t, n, kind)) ** a, lo, hi,
                                    epsrel=epsrel, epsabs=0.0, limit=200, full_output=1)[:3]
        total += r
        err += e
        evals += info["neval"]
    return 2.0 * total, 2.0 * err, evals


def i3(K, n, I4=None):
    """Full-space integral of :func:`i3_integrand` at constant K."""
    if I4 is None:
        I4 = integrate_I4(n).value
    return 2.0 * n * (n + 1) / (n + 2) * K ** (2.0 / n) * I4


def lambda0(n, kind=HeightKind.NAIVE, target_rel_err=1e-6, method=None, samples=None, seed=0):
    """lambda_0 with the error of both factors propagated in quadrature."""
    kind = HeightKind.parse(kind)
    if n < 2:
        raise DomainError("lambda0 requires n >= 2")
    I4 = integrate_I4(n, target_rel_err, method, samples, seed)
    kint, kerr, kev = k_tilde_integral(n, kind)
    pref = 4.0 / math.factorial(n + 1) * 2.0 * n * (n + 1) / (n + 2)
    value = pref * kint * I4.value
    rel = math.hypot(kerr / kint, I4.error_estimate / I4.value)
    comps = {"n": n, "height": kind.value, "I4": I4.value, "I4_err": I4.error_estimate,
             "Ktau_integral": kint, "Ktau_err": kerr, "lambda0": value,
             "lambda0_err": value * rel, "method": I4.method}
    return QuadratureResult(value, value * rel, I4.method, I4.evaluations + kev,
                            I4.target_met, comps)


# ----------------------------------------------- homogeneous reduction

def _check_reduction(m, c, d1, d2, kappa):
    if m < 1:
        raise DomainError("m must be >= 1")
    if kappa <= 0:
        raise DomainError("kappa must be positive")
    if not c * d1 < -m < c * d2:
        raise DomainError(f"need c*d1 < -m < c*d2, got c*d1={c * d1}, -m={-m}, c*d2={c * d2}")


def _f_family(spec, m, c):
    if spec == "radial":
        return lambda x: np.sum(np.asarray(x) ** 2, axis=-1) ** (c / 2.0)
    if spec == "delta_tilde":
        if c != m * (m + 1):
            raise DomainError(f"delta_tilde in m={m} variables is homogeneous of degree {m * (m + 1)}")
        return delta_tilde
    raise DomainError(f"unknown f family {spec!r}; use 'radial' or 'delta_tilde'")


def kappa_exponent(m, c, d1, d2):
    return -(m + c * d1) / (c * (d2 - d1))


def cone_reduction_rhs(m, c, d1, d2, kappa, f):
    """kappa^e * (1/(m+c d2) - 1/(m+c d1)) * int_{[-1,1]^(m-1)} f(t,1)^(-m/c) dt."""
    _check_reduction(m, c, d1, d2, kappa)
    pref = kappa ** kappa_exponent(m, c, d1, d2) * (1.0 / (m + c * d2) - 1.0 / (m + c * d1))
    if m == 1:
        return pref * float(f(np.array([1.0]))) ** (-m / c)
    if m == 2:
        g = lambda t: float(f(np.array([t, 1.0]))) ** (-m / c)
        if f is delta_tilde:
            # f(t, 1) = t^2 (t - 1)^2: algebraic endpoint singularities at 0 and 1
            e = -2.0 * m / c
            return pref * singquad([(0.0, e), (1.0, e)], -1.0, 1.0)[0]
        return pref * integrate.quad(g, -1.0, 1.0, epsrel=1e-12, limit=200)[0]
    raise DomainError("cone_reduction_rhs evaluates the (m-1)-dimensional factor for m <= 2")


def _min_integrand(f, d1, d2, kappa):
    def h(x):
        fx = float(f(np.asarray(x, dtype=float)))
        if fx == 0.0:
            return 0.0
        return min(fx ** d1, kappa * fx ** d2)
    return h


def _switch_points(spec, F, c, y):
    """x in (-y, y) where f(x, y) = F, i.e. where the two branches of the min swap."""
    if spec == "radial":
        r2 = F ** (2.0 / c) - y * y
        pts = [-math.sqrt(r2), math.sqrt(r2)] if r2 > 0 else []
    else:
        # x^2 y^2 (x - y)^2 = F  <=>  x (x - y) = +-sqrt(F) / y
        pts = []
        for sgn in (1.0, -1.0):
            disc = y * y + 4.0 * sgn * math.sqrt(F) / y
            if disc >= 0:
                r = math.sqrt(disc)
                pts += [(y - r) / 2.0, (y + r) / 2.0]
        pts.append(0.0)
    return sorted(p for p in set(pts) if -y < p < y)


def cone_integral_direct(m, c, d1, d2, kappa, spec="radial", epsrel=1e-6):
    """The integral over {x_m > |x_i|} in Cartesian coordinates (m <= 2)."""
    _check_reduction(m, c, d1, d2, kappa)
    f = _f_family(spec, m, c)
    h = _min_integrand(f, d1, d2, kappa)
    F = kappa ** (-1.0 / (d2 - d1))  # value of f where the two branches cross
    if m == 1:
        kink = F ** (1.0 / c)
        v1 = integrate.quad(lambda x: h([x]), 0.0, kink, epsrel=epsrel, limit=200)[0]
        v2 = integrate.quad(lambda x: h([x]), kink, np.inf, epsrel=epsrel, limit=200)[0]
        return v1 + v2
    if m == 2:
        def inner(y):
            if y <= 0.0:
                return 0.0
            edges = [-y] + _switch_points(spec, F, c, y) + [y]
            return sum(integrate.quad(lambda x: h([x, y]), a, b, epsrel=epsrel, limit=200)[0]
                       for a, b in zip(edges[:-1], edges[1:]))

        scale = F ** (1.0 / c)
        cuts = sorted({0.0, scale / math.sqrt(2.0), scale, (4.0 * math.sqrt(F)) ** (1.0 / 3.0),
                       4.0 * scale})
        total = sum(integrate.quad(inner, a, b, epsrel=epsrel, limit=200)[0]
                    for a, b in zip(cuts[:-1], cuts[1:]))
        return total + integrate.quad(inner, cuts[-1], np.inf, epsrel=epsrel, limit=200)[0]
    raise DomainError("direct cone quadrature implemented for m <= 2")


def full_space_polar(m, c, d1, d2, kappa, spec):
    """The integral over all of R^m by radial reduction in polar coordinates (m <= 2)."""
    _check_reduction(m, c, d1, d2, kappa)
    f = _f_family(spec, m, c)
    radial = kappa ** kappa_exponent(m, c, d1, d2) * (1.0 / (m + c * d2) - 1.0 / (m + c * d1))
    # the radial integral of min(r^{c d1} g^{d1}, kappa r^{c d2} g^{d2}) r^{m-1} dr equals
    # radial * g^{-m/c} for a direction with angular factor g
    if m == 1:
        return radial * (float(f(np.array([1.0]))) ** (-1.0 / c)
                         + float(f(np.array([-1.0]))) ** (-1.0 / c))
    if m == 2:
        e = -m / c
        g = lambda phi: float(f(np.array([math.cos(phi), math.sin(phi)])))
        if spec == "radial":
            return radial * 2.0 * math.pi
        # Dt(cos, sin) vanishes to second order at multiples of pi/4 where a coordinate
        # or the difference is zero
        zeros = [0.0, math.pi / 4, math.pi / 2, math.pi, 5 * math.pi / 4, 3 * math.pi / 2,
                 2 * math.pi]
        total = 0.0
        for a, b in zip(zeros[:-1], zeros[1:]):
            # g^e ~ |phi - phi0|^(2e) at each end; QAGS never evaluates the endpoints
            total += integrate.quad(lambda phi: g(phi) ** e, a, b, epsrel=1e-10, limit=400)[0]
        return radial * total
    raise DomainError("polar full-space integral implemented for m <= 2")


def scaling_reduction_check(m, c, d1, d2, kappa=1.0, f_spec="radial", kappa_ref=1.0,
                            tol=1e-3):
    """Compare the single-cone reduction with direct integration.

    Reports the direct cone integral, the reduction formula, their ratio,
    the kappa-scaling ratio against ``kappa_ref``, and which multiple of the
    single-cone value (1, m or 2m) reproduces the integral over all of R^m.
    """
    _check_reduction(m, c, d1, d2, kappa)
    f = _f_family(f_spec, m, c)
    lhs = cone_integral_direct(m, c, d1, d2, kappa, f_spec)
    rhs = cone_reduction_rhs(m, c, d1, d2, kappa, f)
    lhs_ref = cone_integral_direct(m, c, d1, d2, kappa_ref, f_spec)
    ratio = lhs / lhs_ref
    expected_ratio = (kappa / kappa_ref) ** kappa_exponent(m, c, d1, d2)
    full = full_space_polar(m, c, d1, d2, kappa, f_spec)
    factors = {"1": 1, "m": m, "2m": 2 * m}
    matches = {k: abs(v * rhs - full) <= tol * abs(full) for k, v in factors.items()}
    consistent = [k for k, ok in matches.items() if ok]
    return {
        "m": m, "c": c, "d1": d1, "d2": d2, "kappa": kappa, "f": f_spec,
        "cone_direct": lhs, "cone_formula": rhs,
        "cone_rel_diff": abs(lhs - rhs) / abs(rhs),
        "kappa_ratio": ratio, "kappa_ratio_expected": expected_ratio,
        "kappa_ratio_rel_diff": abs(ratio - expected_ratio) / expected_ratio,
        "full_space": full,
        "full_space_over_cone": full / rhs,
        "normalization_matches": matches,
        "consistent_normalization": consistent[0] if len(consistent) == 1 else None,
    }


def i3_reduction_parameters(n, K=1.0):
    """(m, c, d1, d2, kappa) that express the I3 integrand as min(f^d1, kappa f^d2), f = Dt."""
    m = n - 1
    return m, n * (n - 1), -1.0 / (n - 1), 0.5, K ** (n + 1)


# ---------------------------------------------- root-space Monte Carlo

def i1_tilde_mc(n, rho, samples, seed, kind=HeightKind.NAIVE, scale=1.0, chunk=1 << 17):
    """MC estimate of the rescaled root-space integral at scale rho.

    tau is uniform on [-1, 1]; each theta_k is Cauchy with the given scale.
    Returns (mean, stderr, max_ratio) where max_ratio is the largest observed
    value of integrand / i3_integrand(theta, K0 = 1), which must not exceed 1.
    """
    from .volume import stream

    rng = stream(seed, 0)
    s1 = s2 = 0.0
    worst = 0.0
    done = 0
    while done < samples:
        size = min(chunk, samples - done)
        tau = rng.random(size) * 2.0 - 1.0
        th = scale * np.tan(np.pi * (rng.random((size, n - 1)) - 0.5))
        dens = 0.5 * np.prod(scale / (np.pi * (scale * scale + th * th)), axis=1)
        val = i1_integrand(tau, th, rho, n, kind)
        bound = i3_integrand(th, n, 1.0)
        pos = bound > 0
        if pos.any():
            worst = max(worst, float(np.max(val[pos] / bound[pos])))
        w = val / dens
        s1 += w.sum()
        s2 += (w * w).sum()
        done += size
    mean = s1 / samples
    return mean, math.sqrt(max(s2 / samples - mean * mean, 0.0) / samples), worst


def f0_from_root_space(n, delta, rho_integral):
    """f_0(delta) from the rescaled root-space integral at rho = delta^(1/(n(n-1)))."""
    rho = delta ** (1.0 / (n * (n - 1)))
    return 4.0 / math.factorial(n + 1) * rho ** ((n - 1) * (n + 2) / 2.0) * rho_integral
