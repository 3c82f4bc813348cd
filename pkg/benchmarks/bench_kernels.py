"""Throughput of the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--quick]

Each workload runs on both backends, checks that the results are identical
and prints the per-item cost and the speed-up.
"""
import argparse
import time

import numpy as np

from polydisc import _backend, census, volume


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def census_workload(n, Q):
    spec = census.CensusSpec(n, Q, "naive", (Q ** (2 * n - 2),))
    items = census.symmetry_reduce(spec).cardinality
    return f"census n={n} Q={Q}", items, lambda: census.run_census(spec).counts


def mc_workload(n, samples):
    deltas = [1e-3, 1e-2, 1e-1]
    return (f"volume n={n}", samples,
            lambda: [e.hits for e in volume.estimate_f_grid(n, None, deltas, samples, 7)])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if "compiled" not in _backend.available():
        raise SystemExit("compiled extension not built; run `pip install -e .` first")
    scale = 1 if args.quick else 4
    work = [census_workload(3, 4 * scale), census_workload(4, 2 + scale),
            mc_workload(3, 20_000 * scale), mc_workload(4, 20_000 * scale)]
    print(f"{'workload':<22}{'items':>10}{'python us/item':>16}{'compiled us/item':>18}"
          f"{'speed-up':>10}")
    for label, items, fn in work:
        fn()  # warm caches (symbolic discriminant expansion, imports)
        _backend.use("python")
        tp, rp = _time(fn, 1)
        _backend.use("compiled")
        tc, rc = _time(fn, args.repeat)
        if rp != rc:
            raise SystemExit(f"{label}: backends disagree")
        print(f"{label:<22}{items:>10}{1e6 * tp / items:>16.2f}{1e6 * tc / items:>18.3f}"
              f"{tp / tc:>10.1f}")
    _backend.use("compiled")


if __name__ == "__main__":
    main()
