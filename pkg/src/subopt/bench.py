"""Benchmark harness: solver x problem grids, performance profiles, CSV output."""

from __future__ import annotations

import csv
import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .baselines import TARGET_TOL, classical_subgradient, gradient_sampling
from .core import RunReport, SolverParams, Status
from .outer import solve
from .problems import canonical_name, make_problem, random_start, reference_value, relative_error

MAX_ITERS = 10_000


@dataclass(frozen=True)
class BenchResult:
    problem: str
    solver: str
    n: int
    seed: int
    cost_evals: int
    cost_time: float
    success: bool
    f_end: float
    E_end: float
    status: str = ""
    message: str = ""


def _run_subopt(oracle, x0, f_star, seed, params):
    params = params or SolverParams(max_inner_iters=MAX_ITERS)
    _, report = solve(oracle, x0, params,
                      stop=lambda x, f: relative_error(f, f_star) < TARGET_TOL)
    return report


def _run_subg(oracle, x0, f_star, seed, params):
    return classical_subgradient(oracle, x0, max_iters=MAX_ITERS, f_star=f_star)


def _run_gs(oracle, x0, f_star, seed, params):
    return gradient_sampling(oracle, x0, max_iters=MAX_ITERS, f_star=f_star, seed=seed)


SOLVERS: dict[str, Callable[..., RunReport]] = {
    "subopt": _run_subopt,
    "subg": _run_subg,
    "gs": _run_gs,
}


def _one(job) -> BenchResult:
    problem, solver, n, seed, params = job
    f_star = reference_value(problem, n)
    oracle, spec = make_problem(problem, n)
    x0 = random_start(spec.default_start, n, seed)
    try:
        report = SOLVERS[solver](oracle, x0, f_star, seed, params)
    except Exception as exc:  # recorded, never fatal to the suite
        return BenchResult(problem, solver, n, seed, 0, math.nan, False, math.nan, math.nan,
                           "Error", f"{type(exc).__name__}: {exc}")
    err = relative_error(report.f_end, f_star)
    success = bool(err < TARGET_TOL and report.status != Status.ITER_CAP)
    return BenchResult(problem, solver, n, seed, report.evals, report.wall_time, success,
                       float(report.f_end), float(err), report.status.value, report.message)


def run_suite(problems: Sequence[str], solvers: Sequence[str], n: int, seeds: Iterable[int] = (0,),
              workers: int | None = None, params: SolverParams | None = None) -> list[BenchResult]:
    """One result per (problem, solver, seed), in that nesting order.

    ``workers > 1`` runs jobs in a process pool; order is unchanged.
    """
    problems = [canonical_name(p) for p in problems]
    for s in solvers:
        if s not in SOLVERS:
            raise KeyError(f"unknown solver {s!r}; choose from {', '.join(SOLVERS)}")
    if n < 2:
        raise ValueError("n must be at least 2")
    seeds = list(seeds)
    jobs = [(p, s, n, seed, params) for p in problems for s in solvers for seed in seeds]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_one, jobs))
    return [_one(job) for job in jobs]


@dataclass
class Profile:
    metric: str
    taus: np.ndarray
    rho: dict[str, np.ndarray]


def performance_ratios(results: Sequence[BenchResult], metric: str = "evals") -> dict[str, dict[tuple, float]]:
    """``r_{p,s}``; failures get ``inf``. A problem instance is (problem, n, seed)."""
    if metric not in ("evals", "time"):
        raise ValueError("metric must be 'evals' or 'time'")
    attr = "cost_evals" if metric == "evals" else "cost_time"
    cost: dict[tuple, dict[str, float]] = {}
    for r in results:
        c = float(getattr(r, attr)) if r.success else math.inf
        cost.setdefault((r.problem, r.n, r.seed), {})[r.solver] = c
    solvers = sorted({r.solver for r in results})
    ratios: dict[str, dict[tuple, float]] = {s: {} for s in solvers}
    for key, by_solver in cost.items():
        best = min(by_solver.values())
        for s in solvers:
            c = by_solver.get(s, math.inf)
            if math.isinf(c) or math.isinf(best):
                ratios[s][key] = math.inf
            elif best <= 0.0:
                ratios[s][key] = 1.0 if c <= 0.0 else math.inf
            else:
                ratios[s][key] = c / best
    return ratios


def performance_profile(results: Sequence[BenchResult], metric: str = "evals", samples: int = 200) -> Profile:
    """Dolan-More profiles at ``samples`` log-uniform tau values in ``[1, max finite ratio]``."""
    if not results:
        raise ValueError("need at least one result")
    ratios = performance_ratios(results, metric)
    finite = [v for per in ratios.values() for v in per.values() if math.isfinite(v)]
    tau_max = max(finite) if finite else 1.0
    taus = np.exp(np.linspace(0.0, math.log(tau_max), samples))
    taus[-1] = tau_max
    rho = {}
    for s, per in ratios.items():
        vals = np.array(list(per.values()))
        rho[s] = np.array([(vals <= t).sum() / len(vals) for t in taus])
    return Profile(metric, taus, rho)


_RESULT_FIELDS = [f.name for f in dataclasses.fields(BenchResult)]
_PROFILE_FIELDS = ["metric", "solver", "tau", "rho"]


def emit_csv(data, path) -> None:
    """Write a result list or a :class:`Profile`; floats use ``repr`` so read-back is exact."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if isinstance(data, Profile):
            w.writerow(_PROFILE_FIELDS)
            for s in sorted(data.rho):
                for t, r in zip(data.taus, data.rho[s]):
                    w.writerow([data.metric, s, repr(float(t)), repr(float(r))])
            return
        w.writerow(_RESULT_FIELDS)
        for r in data:
            w.writerow([repr(v) if isinstance(v, float) else v for v in dataclasses.astuple(r)])


def read_results_csv(path) -> list[BenchResult]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out.append(BenchResult(
                problem=row["problem"], solver=row["solver"], n=int(row["n"]), seed=int(row["seed"]),
                cost_evals=int(row["cost_evals"]), cost_time=float(row["cost_time"]),
                success=row["success"] == "True", f_end=float(row["f_end"]), E_end=float(row["E_end"]),
                status=row["status"], message=row["message"]))
    return out


def read_profile_csv(path) -> Profile:
    taus: dict[str, list[float]] = {}
    rho: dict[str, list[float]] = {}
    metric = ""
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            metric = row["metric"]
            taus.setdefault(row["solver"], []).append(float(row["tau"]))
            rho.setdefault(row["solver"], []).append(float(row["rho"]))
    if not taus:
        raise ValueError(f"{path} holds no profile rows")
    first = next(iter(taus.values()))
    return Profile(metric, np.array(first), {s: np.array(v) for s, v in rho.items()})

