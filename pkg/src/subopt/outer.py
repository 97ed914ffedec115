"""Outer loop: shrink the stationarity tolerance and the sampling radius together."""

from __future__ import annotations

import math
import time
from typing import Callable

import numpy as np

from .core import (CountingOracle, IterCapReached, LineSearchStalled, ObjectiveOracle, RunReport,
                   SolverParams, Status, Vector, validate_params)
from .inner import Observer, TargetReached, _dg_sp


def schedule(params: SolverParams, nu: int) -> tuple[float, float]:
    """``(delta_nu, eps_nu)`` for round ``nu``."""
    return params.delta0 * params.reduce_delta ** nu, params.eps0 * params.reduce_eps ** nu


def rounds_needed(params: SolverParams) -> int:
    """Index of the first round whose delta and eps are both at most ``eta``.

    Closed form of the schedule's stopping rule; ``solve`` reports this value
    as ``outer_iters`` on a converged run.
    """
    if params.eta <= 0:
        raise ValueError("eta must be positive for a finite schedule")

    def first(start, factor):
        if start <= params.eta:
            return 0
        nu = math.ceil(math.log(start / params.eta) / math.log(1.0 / factor))
        # Guard the ceiling against rounding at exact powers.
        while nu > 0 and start * factor ** (nu - 1) <= params.eta:
            nu -= 1
        while start * factor ** nu > params.eta:
            nu += 1
        return nu

    return max(first(params.delta0, params.reduce_delta), first(params.eps0, params.reduce_eps))


def solve(oracle: ObjectiveOracle, x0, params: SolverParams | None = None, *,
          observer: Observer | None = None,
          stop: Callable[[Vector, float], bool] | None = None) -> tuple[Vector, RunReport]:
    """Minimize ``oracle`` from ``x0``.

    Runs inner solves for rounds nu = 0, 1, ... and returns after the first
    round with ``delta_nu <= eta`` and ``eps_nu <= eta``. The returned point
    is the output of that last inner solve. ``stop(x, f)`` is checked after
    every descent step and ends the run early with status Converged.
    Iteration caps and line-search stalls are reported in ``report.status``
    rather than raised.
    """
    params = validate_params(params or SolverParams())
    counted = CountingOracle(oracle)
    report = RunReport()
    x = np.array(x0, dtype=float)
    if x.shape != (oracle.dimension,):
        raise ValueError(f"x0 has shape {x.shape}, expected ({oracle.dimension},)")

    start = time.perf_counter()
    fx = counted.value(x)
    nu = 0
    try:
        if stop is not None and stop(x, fx):
            raise TargetReached(x, fx)
        while True:
            delta, eps = schedule(params, nu)
            if eps <= 0.0 or delta <= 0.0:
                raise IterCapReached(x, fx, report.inner_iters)
            x, fx = _dg_sp(counted, x, eps, delta, params, report, fx0=fx, outer=nu,
                           observer=observer, stop=stop)
            report.outer_iters = nu
            if delta <= params.eta and eps <= params.eta:
                report.status = Status.CONVERGED
                break
            nu += 1
    except TargetReached as hit:
        x, fx = hit.x, hit.fx
        report.outer_iters = nu
        report.status = Status.CONVERGED
        report.target_reached = True
    except IterCapReached as cap:
        x, fx = cap.x, cap.fx
        report.outer_iters = nu
        report.status = Status.ITER_CAP
        report.message = str(cap)
    except LineSearchStalled as stall:
        report.outer_iters = nu
        report.status = Status.LS_STALLED
        report.message = str(stall)
    report.wall_time = time.perf_counter() - start
    report.absorb_counts(counted)
    report.x_end = x
    report.f_end = fx
    return x, report
