"""Command-line entry point: ``polydisc {census,volume,lambda0,check,report}``.

Outputs are written atomically; every file carries the resolved
configuration as ``key=value`` lines, with the timestamp kept separate.
Failures print one JSON error record on stderr and exit nonzero.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys

import numpy as np

from . import __version__, io
from .errors import DomainError, PolydiscError, WorkBudgetExceeded

EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_BUDGET = 4
EXIT_IO = 5
EXIT_CHECK_FAILED = 6
EXIT_INTERNAL = 70

HEIGHTS = ("naive", "length", "mahler")


class UsageError(PolydiscError):
    code = "usage-error"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --------------------------------------------------------------- grids

def parse_real_grid(text):
    """``geometric:lo:hi:count``, ``linear:lo:hi:count`` or a comma list, sorted ascending."""
    text = text.strip()
    if text.startswith(("geometric:", "linear:")):
        parts = text.split(":")
        if len(parts) != 4:
            raise UsageError(f"grid {text!r}: expected kind:lo:hi:count")
        kind, lo, hi, cnt = parts[0], float(parts[1]), float(parts[2]), int(parts[3])
        if cnt < 1:
            raise UsageError("grid count must be >= 1")
        if kind == "geometric":
            if lo <= 0 or hi <= 0:
                raise UsageError("geometric grid endpoints must be positive")
            vals = np.geomspace(lo, hi, cnt) if cnt > 1 else np.array([lo])
        else:
            vals = np.linspace(lo, hi, cnt)
        vals = [float(v) for v in vals]
    else:
        try:
            vals = [float(x) for x in text.split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"cannot parse grid {text!r}") from None
    if not vals:
        raise UsageError("empty grid")
    if any(not math.isfinite(v) or v < 0 for v in vals):
        raise UsageError("grid values must be finite and nonnegative")
    return sorted(set(vals))


def parse_int_grid(text):
    """Exact integers: comma list of decimal strings, or ``geometric:lo:hi:count`` rounded down."""
    text = text.strip()
    if text.startswith("geometric:"):
        vals = [int(math.floor(v)) for v in parse_real_grid(text)]
    else:
        try:
            vals = [int(x.strip()) for x in text.split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"thresholds must be decimal integers, got {text!r}") from None
    if any(v < 0 for v in vals):
        raise UsageError("thresholds must be nonnegative")
    if not vals:
        raise UsageError("empty threshold list")
    return sorted(set(vals))


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be a nonnegative integer, got {text}")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


# -------------------------------------------------------------- output

def _emit(args, text):
    if args.output in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        io.atomic_write(args.output, text)
    except OSError as exc:
        raise OSError(f"cannot write {args.output}: {exc.strerror}") from exc


def _config(args, **extra):
    skip = {"func", "output", "verbose"}
    cfg = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    cfg.update(extra)
    cfg["version"] = __version__
    return cfg


# ------------------------------------------------------------ commands

def cmd_census(args):
    from . import _backend, census

    if args.backend:
        _backend.use(args.backend)
    X = parse_int_grid(args.X)
    spec = census.CensusSpec(args.n, args.Q, args.height, tuple(X), args.workers,
                             reduce=not args.no_reduce, budget=args.budget)
    table = census.run_census(spec)
    cfg = _config(args, X=X, backend=table.metadata["backend"], total=table.total,
                  ambiguous=len(table.ambiguous))
    rows = list(table.records())
    _emit(args, io.csv_text(rows, io.CENSUS_FIELDS, cfg))
    return 0


def cmd_volume(args):
    from . import _backend, volume

    if args.backend:
        _backend.use(args.backend)
    deltas = parse_real_grid(args.delta)
    s = None if args.s == "all" else int(args.s)
    if s is not None and not 0 <= s <= args.n // 2:
        raise DomainError(f"signature s must lie in [0, {args.n // 2}] for n={args.n}")
    ops = args.samples * (args.n + 1) ** 2
    if ops > args.budget:
        raise WorkBudgetExceeded(f"volume run needs about {ops:.3g} operations, budget is "
                                 f"{args.budget:.3g}", required=ops, budget=args.budget)
    ests = volume.estimate_f_grid(args.n, s, deltas, args.samples, args.seed, args.height,
                                  args.workers)
    cfg = _config(args, delta=deltas)
    if args.format == "csv":
        _emit(args, io.csv_text(io.volume_rows(ests), io.VOLUME_FIELDS, cfg))
    else:
        payload = {"estimates": [e.to_json() for e in ests]}
        if len(ests) == 1:
            payload = ests[0].to_json()
        _emit(args, io.json_text(payload, cfg))
    return 0


def cmd_lambda0(args):
    from . import asymptotic

    res = asymptotic.lambda0(args.n, args.height, args.target_rel_err, args.method,
                             args.samples, args.seed)
    payload = dict(res.components)
    payload["target_met"] = res.target_met
    payload["evaluations"] = res.evaluations
    _emit(args, io.json_text(payload, _config(args)))
    return 0


def cmd_check(args):
    from . import checks

    names = args.only.split(",") if args.only else None
    results = checks.run_checks(names, full=args.full)
    ok = all(r["pass"] for r in results)
    _emit(args, io.json_text({"checks": results, "all_pass": ok}, _config(args)))
    return 0 if ok else EXIT_CHECK_FAILED


def _load_volume(path):
    from .volume import McEstimate

    if path.endswith(".csv"):
        _, rows = io.read_csv(path)
        return [McEstimate(mean=float(r["mean"]), stderr=float(r["stderr"]),
                           samples=int(r["samples"]), hits=int(r["hits"]), seed=int(r["seed"]),
                           n=int(r["n"]), s=None if r["s"] == "all" else int(r["s"]),
                           height=r["height"], delta=float(r["delta"])) for r in rows]
    doc = io.read_json(path)
    items = doc.get("estimates", [doc])
    keys = ("mean", "stderr", "samples", "hits", "seed", "n", "s", "height", "delta")
    return [McEstimate(**{k: e[k] for k in keys}) for e in items]


def cmd_report(args):
    from . import harness

    if args.kind == "boundedness":
        if args.delta is None or args.s is None:
            raise UsageError("boundedness needs --delta and --s")
        ests = [e for e in _load_volume(args.volume) if e.s == args.s
                and math.isclose(e.delta, float(harness._exact(args.delta)), rel_tol=1e-12)]
        if len(ests) != 1:
            raise DomainError(f"volume file has {len(ests)} estimates for s={args.s}, "
                              f"delta={args.delta}; need exactly one")
        counts = {}
        for path in args.census:
            _, rows = io.read_csv(path)
            for (n, Q, h, s, X), c in io.parse_census_rows(rows).items():
                if n == args.n and s == args.s and h == args.height and \
                        X == harness.threshold_for(args.delta, Q, n):
                    counts[Q] = c
        if not counts:
            raise DomainError("no census row matches n, s, height and X = delta*Q^(2n-2)")
        rep = harness.boundedness_report(args.n, args.s, args.delta, counts, ests[0],
                                         ratio_limit=args.ratio_limit, height=args.height)
        plot = harness.plot_rows_boundedness(rep)
        fields = ["Q", "N", "model", "r", "band"]
    else:
        if args.lambda0 is None:
            raise UsageError("power-law needs --lambda0")
        ests = [e for e in _load_volume(args.volume) if e.s in (0, None) and e.n == args.n]
        ests = [e for e in ests if e.s == 0] or ests
        lam = io.read_json(args.lambda0)
        rep = harness.power_law_report(args.n, ests, lam["lambda0"],
                                       lambda0_err=lam.get("lambda0_err", 0.0),
                                       height=args.height)
        plot = harness.plot_rows_power_law(rep)
        fields = ["delta", "f", "stderr", "model"]
    cfg = _config(args)
    _emit(args, io.json_text(rep, cfg))
    if args.plot:
        io.write_csv(args.plot, plot, fields, cfg)
    return 0


# -------------------------------------------------------------- parser

def build_parser():
    p = _Parser(prog="polydisc", description=(
        "Exact census and volume estimates for discriminants of integer polynomials."))
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, output_help):
        sp.add_argument("--output", "-o", default=None,
                        help=f"{output_help} (path; '-' or omitted means stdout)")

    c = sub.add_parser("census", help="exact counts N_s(Q, X)",
                       description="Count integer polynomials of degree n and height <= Q "
                                   "by signature s and |discriminant| <= X.")
    c.add_argument("--n", type=_positive_int, required=True, help="degree (integer >= 2)")
    c.add_argument("--Q", type=_positive_int, required=True, help="height bound (integer >= 1)")
    c.add_argument("--height", choices=HEIGHTS, default="naive", help="height function")
    c.add_argument("--X", required=True,
                   help="discriminant thresholds: comma list of decimal integers or "
                        "geometric:lo:hi:count (rounded down); dimensionless")
    c.add_argument("--workers", type=_positive_int, default=1, help="worker processes (count)")
    c.add_argument("--budget", type=_positive_int, default=2 * 10 ** 10,
                   help="maximum work in elementary operations (count)")
    c.add_argument("--no-reduce", action="store_true",
                   help="visit every polynomial instead of one per sign/reflection orbit")
    c.add_argument("--backend", choices=("compiled", "python"), default=None,
                   help="kernel implementation (default: compiled if built)")
    common(c, "CSV output")
    c.set_defaults(func=cmd_census)

    v = sub.add_parser("volume", help="Monte Carlo estimates of f_s(delta)",
                       description="Estimate the volume of {h(a) <= 1, signature s, |D(a)| <= "
                                   "delta} in R^(n+1).")
    v.add_argument("--n", type=_positive_int, required=True, help="degree (integer >= 2)")
    v.add_argument("--s", default="all",
                   help="signature (number of complex root pairs) or 'all'")
    v.add_argument("--delta", required=True,
                   help="discriminant bound(s), dimensionless: value, comma list, "
                        "geometric:lo:hi:count or linear:lo:hi:count")
    v.add_argument("--samples", type=_positive_int, required=True, help="sample count")
    v.add_argument("--seed", type=_nonneg_int, default=0, help="64-bit RNG seed")
    v.add_argument("--height", choices=HEIGHTS, default="naive", help="height function")
    v.add_argument("--workers", type=_positive_int, default=1,
                   help="worker processes (count); part of the reproducibility key")
    v.add_argument("--budget", type=_positive_int, default=10 ** 13,
                   help="maximum work in elementary operations (count)")
    v.add_argument("--format", choices=("json", "csv"), default="json", help="output format")
    v.add_argument("--backend", choices=("compiled", "python"), default=None,
                   help="kernel implementation (default: compiled if built)")
    common(v, "estimate file")
    v.set_defaults(func=cmd_volume)

    l = sub.add_parser("lambda0", help="the small-discriminant constant lambda_0",
                       description="Evaluate lambda_0 and its factors by quadrature or "
                                   "importance sampling.")
    l.add_argument("--n", type=_positive_int, required=True, help="degree (integer >= 2)")
    l.add_argument("--height", choices=HEIGHTS, default="naive", help="height function")
    l.add_argument("--target-rel-err", type=_positive_float, default=1e-6,
                   help="target relative error (dimensionless)")
    l.add_argument("--method", choices=("adaptive-grid", "mc-importance"), default=None,
                   help="I4 method (default: adaptive-grid for n <= 4)")
    l.add_argument("--samples", type=_positive_int, default=None,
                   help="fixed MC sample count (count); default grows to meet the target")
    l.add_argument("--seed", type=_nonneg_int, default=0, help="64-bit RNG seed")
    common(l, "JSON output")
    l.set_defaults(func=cmd_lambda0)

    k = sub.add_parser("check", help="run the built-in property oracles",
                       description="Run fast oracle checks; exit status 6 if any fails.")
    k.add_argument("--only", default=None, help="comma list of check names")
    k.add_argument("--full", action="store_true", help="full-size runs (minutes)")
    common(k, "JSON output")
    k.set_defaults(func=cmd_check)

    r = sub.add_parser("report", help="boundedness and power-law reports from saved census/volume/lambda0 files",
                       description="Join saved artifacts into a JSON report and a plot file.")
    r.add_argument("kind", choices=("boundedness", "power-law"), help="which report")
    r.add_argument("--n", type=_positive_int, required=True, help="degree (integer >= 2)")
    r.add_argument("--height", choices=HEIGHTS, default="naive", help="height function")
    r.add_argument("--volume", required=True, help="volume estimate file (JSON or CSV)")
    r.add_argument("--census", nargs="*", default=[], help="census CSV files, one per Q")
    r.add_argument("--lambda0", default=None, help="lambda0 JSON file (power-law)")
    r.add_argument("--s", type=_nonneg_int, default=None, help="signature (boundedness)")
    r.add_argument("--delta", default=None,
                   help="scaled discriminant bound delta = X / Q^(2n-2), dimensionless "
                        "(boundedness; decimal string kept exact)")
    r.add_argument("--ratio-limit", type=_positive_float, default=3.0,
                   help="boundedness rule: max r over the two largest Q <= limit x median r")
    r.add_argument("--plot", default=None, help="plot-ready CSV output path")
    common(r, "JSON report")
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
        return args.func(args)
    except SystemExit as exc:  # --help / --version
        return exc.code if isinstance(exc.code, int) else 0
    except UsageError as exc:
        return _fail(exc.to_record(), EXIT_USAGE)
    except WorkBudgetExceeded as exc:
        return _fail(exc.to_record(), EXIT_BUDGET)
    except (PolydiscError, ValueError) as exc:
        rec = exc.to_record() if isinstance(exc, PolydiscError) else \
            {"error": "invalid-value", "message": str(exc)}
        return _fail(rec, EXIT_DOMAIN)
    except OSError as exc:
        return _fail({"error": "io-error", "message": str(exc)}, EXIT_IO)
    except Exception as exc:  # pragma: no cover - last-resort record
        return _fail({"error": "internal", "message": f"{type(exc).__name__}: {exc}"},
                     EXIT_INTERNAL)


def _fail(record, status):
    record["exit_status"] = status
    sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
