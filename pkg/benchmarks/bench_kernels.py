"""Time the compiled and pure-Python min-norm kernels on the same bundles.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--suite]

Prints one row per bundle shape with the median time of each backend, the
speedup, and the largest gap between the two solutions. ``--suite`` also
times full solves of the ten test problems (n=10, seed 7) per backend.
"""

import argparse
import statistics
import time

import numpy as np

import subopt.minnorm as minnorm
from subopt.minnorm import available_backends, min_norm_point
from subopt.outer import solve
from subopt.problems import PROBLEM_NAMES, make_problem, random_start, reference_value, relative_error

SHAPES = [(3, 2), (5, 4), (10, 10), (20, 10), (30, 50), (50, 50), (100, 50), (60, 100)]


def _time(P, backend, repeat):
    samples = []
    for _ in range(repeat):
        start = time.perf_counter()
        sol = min_norm_point(P, backend=backend)
        samples.append(time.perf_counter() - start)
    return statistics.median(samples), sol


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=20)
    parser.add_argument("--suite", action="store_true", help="also time whole solves")
    args = parser.parse_args(argv)

    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernel not built; only the Python backend is available")
    rng = np.random.default_rng(0)
    print(f"{'m':>4} {'n':>4} " + " ".join(f"{b + ' [ms]':>14}" for b in backends) + f" {'speedup':>8} {'max gap':>9}")
    for m, n in SHAPES:
        # Subgradient-like bundles: a common offset plus spread, so the
        # min-norm point sits on a face of moderate size.
        P = rng.normal(size=n) * 0.5 + rng.normal(size=(m, n))
        times, sols = {}, {}
        for b in backends:
            times[b], sols[b] = _time(P, b, args.repeat)
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        gap = max(np.max(np.abs(sols[b].g_star - sols["python"].g_star)) for b in backends)
        print(f"{m:>4} {n:>4} " + " ".join(f"{1e3 * times[b]:>14.3f}" for b in backends)
              + f" {speed:>8.1f} {gap:>9.1e}")

    if args.suite:
        _suite(backends)


def _suite(backends, n=10, seed=7):
    print(f"\nfull solves, n={n}, seed {seed}, stop at E < 5e-4")
    print(f"{'problem':18s} " + " ".join(f"{b + ' [s]':>12}" for b in backends) + f" {'same evals':>11}")
    default = minnorm.BACKEND
    try:
        for name in PROBLEM_NAMES:
            oracle, spec = make_problem(name, n)
            f_star = reference_value(name, n)
            x0 = random_start(spec.default_start, n, seed)
            times, evals = {}, {}
            for b in backends:
                minnorm.BACKEND = b
                _, rep = solve(oracle, x0, stop=lambda x, f: relative_error(f, f_star) < 5e-4)
                times[b], evals[b] = rep.wall_time, rep.evals
            print(f"{name:18s} " + " ".join(f"{times[b]:>12.3f}" for b in backends)
                  + f" {str(len(set(evals.values())) == 1):>11}")
    finally:
        minnorm.BACKEND = default


if __name__ == "__main__":
    main()
