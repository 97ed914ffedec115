"""Inner loop: drive the bundle's least-norm element below ``delta``.

Each iteration solves the min-norm subproblem, then runs the line search
along the normalized negative of the result. A descent step moves the
iterate and restarts the bundle from one subgradient. A null step keeps the
iterate and appends the returned subgradient.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import IterCapReached, ObjectiveOracle, RunReport, SolverParams, Vector
from .linesearch import Descent, LineSearchOutcome, two_point_line_search
from .minnorm import Bundle, MinNormSolution, min_norm_point


@dataclass
class StepRecord:
    """What the observer sees once per inner iteration.

    ``outcome`` is None on the final, stationary iteration. ``bundle`` is the
    working set *before* the update.
    """

    outer: int
    k: int
    eps: float
    delta: float
    x: Vector
    fx: float
    bundle: Bundle
    solution: MinNormSolution
    outcome: Optional[LineSearchOutcome]
    bundle_size: int
    reset: bool
    breakdown: bool = False


Observer = Callable[[StepRecord], None]


class TargetReached(Exception):
    """Raised when a caller-supplied stop test fires after a descent step."""

    def __init__(self, x: Vector, fx: float):
        super().__init__("target reached")
        self.x = x
        self.fx = fx


def reset_bundle(bundle: Bundle, solution: MinNormSolution, theta: float, M: int) -> Bundle:
    """Keep the members carrying weight mass ``theta`` and append ``g*``.

    Members are ranked by weight (stable, so earlier members win ties) and
    the shortest prefix whose mass reaches ``theta`` survives, in insertion
    order. At most ``M - 2`` members are kept so the bundle stays within M
    after ``g*`` and the next subgradient are added.
    """
    lam = np.asarray(solution.weights, dtype=float)
    order = sorted(range(len(lam)), key=lambda j: -lam[j])
    mass = np.cumsum(lam[order])
    # Slack absorbs weights that sum to theta only up to rounding.
    hits = np.flatnonzero(mass >= theta - 1e-12)
    keep_count = int(hits[0]) + 1 if hits.size else len(lam)
    keep_count = min(keep_count, M - 2)
    kept = sorted(order[:keep_count])
    return Bundle([bundle.members[j] for j in kept] + [np.array(solution.g_star, dtype=float)])


def _dg_sp(oracle: ObjectiveOracle, x0: Vector, eps: float, delta: float, params: SolverParams,
           report: RunReport, fx0: float | None = None, outer: int = 0,
           observer: Observer | None = None,
           stop: Callable[[Vector, float], bool] | None = None) -> tuple[Vector, float]:
    x = np.array(x0, dtype=float)
    fx = oracle.value(x) if fx0 is None else fx0
    bundle = Bundle([oracle.subgradient(x)])
    prev_norm = np.inf
    while True:
        solution = min_norm_point(bundle, tol_opt=params.tol_opt)
        # A null step must shrink ||g*||. When it does not, ||g*||^2 has sunk
        # below the rounding level of the bundle and no direction can be
        # certified, so x is stationary to working precision.
        breakdown = solution.norm >= prev_norm
        if solution.norm <= delta or breakdown:
            if breakdown:
                report.extra["breakdowns"] = report.extra.get("breakdowns", 0) + 1
            if observer is not None:
                observer(StepRecord(outer, report.inner_iters, eps, delta, x, fx, bundle,
                                    solution, None, len(bundle), False, breakdown))
            return x, fx
        if report.inner_iters >= params.max_inner_iters:
            raise IterCapReached(x, fx, report.inner_iters)

        outcome = two_point_line_search(oracle, eps, x, solution.g_star, params, fx=fx,
                                        record_brackets=observer is not None)
        before, x_before, fx_before = bundle, x, fx
        reset = False
        if isinstance(outcome, Descent):
            x, fx = outcome.point, outcome.f_point
            bundle = Bundle([oracle.subgradient(x)])
            prev_norm = np.inf
        else:
            prev_norm = solution.norm
            # A reset can leave M members, so test with >= rather than ==.
            if params.reset_enabled and len(bundle) >= params.reset_M - 1:
                bundle = reset_bundle(bundle, solution, params.reset_theta, params.reset_M)
                reset = True
            else:
                bundle = bundle.copy()
            bundle.append(outcome.subgradient)
        report.inner_iters += 1
        if observer is not None:
            observer(StepRecord(outer, report.inner_iters - 1, eps, delta, x_before, fx_before,
                                before, solution, outcome, len(bundle), reset))
        if stop is not None and isinstance(outcome, Descent) and stop(x, fx):
            raise TargetReached(x, fx)


def dg_sp(oracle: ObjectiveOracle, x0: Vector, eps: float, delta: float, params: SolverParams,
          report: RunReport | None = None, **kwargs) -> Vector:
    """Return a point whose bundle has a least-norm element of norm at most ``delta``.

    Raises :class:`IterCapReached` once ``report.inner_iters`` hits
    ``params.max_inner_iters``; line-search stalls propagate.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0,1)")
    if not delta > 0.0:
        raise ValueError("delta must be positive")
    if report is None:
        report = RunReport()
    x, _ = _dg_sp(oracle, x0, eps, delta, params, report, **kwargs)
    return x


class CSVTrace:
    """Observer writing one CSV row per inner iteration.

    Columns: outer round, inner counter k, indicator (1 descent, 0 null step,
    empty when stationary), ||g*||, f(x_k), bundle size after the update.
    """

    header = ["outer", "k", "indicator", "gnorm", "f", "bundle_size"]

    def __init__(self, path):
        self._fh = open(path, "w", newline="")
        self._writer = csv.writer(self._fh)
        self._writer.writerow(self.header)

    def __call__(self, rec: StepRecord) -> None:
        indicator = "" if rec.outcome is None else rec.outcome.indicator
        self._writer.writerow([rec.outer, rec.k, indicator, repr(rec.solution.norm),
                               repr(rec.fx), rec.bundle_size])

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
