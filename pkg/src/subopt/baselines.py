"""Comparison solvers: classical subgradient and gradient sampling.

Both count oracle calls through :class:`CountingOracle` and return a
:class:`RunReport`, so the benchmark harness treats them like the main
solver.
"""

from __future__ import annotations

import time
from typing import Callable

import numpy as np

from .core import CountingOracle, ObjectiveOracle, RunReport, Status, Vector
from .minnorm import min_norm_point

TARGET_TOL = 5e-4


def _target(f_star: float | None, tol: float) -> Callable[[float], bool]:
    if f_star is None:
        return lambda f: False
    return lambda f: abs(f - f_star) / (abs(f_star) + 1.0) < tol


def _finish(report: RunReport, counted: CountingOracle, start: float, x: Vector, fx: float) -> RunReport:
    report.wall_time = time.perf_counter() - start
    report.absorb_counts(counted)
    report.x_end = x
    report.f_end = fx
    return report


def classical_subgradient(oracle: ObjectiveOracle, x0, step_rule: str = "harmonic", a: float | None = None,
                          max_iters: int = 10_000, f_star: float | None = None,
                          tol: float = TARGET_TOL) -> RunReport:
    """Normalized subgradient steps ``x - alpha_k xi_k/||xi_k||``.

    ``step_rule`` is ``"harmonic"`` (``alpha_k = a/k``) or ``"constant"``
    (``alpha_k = a``); ``a`` defaults to ``||x0|| + 1``. The report carries the
    best point seen. Without ``f_star`` the run always ends at ``max_iters``.
    """
    if step_rule not in ("harmonic", "constant"):
        raise ValueError(f"unknown step rule {step_rule!r}")
    x = np.array(x0, dtype=float)
    if a is None:
        a = float(np.linalg.norm(x)) + 1.0
    if not a > 0:
        raise ValueError("step scale a must be positive")

    counted = CountingOracle(oracle)
    report = RunReport(status=Status.ITER_CAP)
    hit = _target(f_star, tol)
    start = time.perf_counter()
    fx = counted.value(x)
    best_x, best_f = x.copy(), fx
    if hit(fx):
        report.status, report.target_reached = Status.CONVERGED, True
        return _finish(report, counted, start, best_x, best_f)

    for k in range(1, max_iters + 1):
        xi = counted.subgradient(x)
        norm = float(np.linalg.norm(xi))
        if norm == 0.0:
            report.status = Status.CONVERGED
            report.message = "zero subgradient"
            break
        alpha = a / k if step_rule == "harmonic" else a
        x = x - alpha * xi / norm
        fx = counted.value(x)
        report.inner_iters = k
        if fx < best_f:
            best_x, best_f = x.copy(), fx
        if hit(best_f):
            report.status, report.target_reached = Status.CONVERGED, True
            break
    return _finish(report, counted, start, best_x, best_f)


def _ball_sample(rng: np.random.Generator, x: Vector, radius: float, count: int) -> np.ndarray:
    n = x.size
    dirs = rng.standard_normal((count, n))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    radii = radius * rng.random(count) ** (1.0 / n)
    return x + radii[:, None] * dirs


def gradient_sampling(oracle: ObjectiveOracle, x0, sample_size: int | None = None, eps0: float = 0.1,
                      nu0: float = 0.1, shrink: float = 0.1, eta: float = 1e-8,
                      max_iters: int = 10_000, f_star: float | None = None, tol: float = TARGET_TOL,
                      seed: int = 0, armijo: float = 1e-4, backtrack: float = 0.5,
                      max_backtracks: int = 60, tol_opt: float = 1e-12) -> RunReport:
    """Simplified gradient sampling.

    Each iteration bundles the subgradient at ``x`` with ``sample_size``
    (default ``2n``) subgradients drawn uniformly from the ball of radius
    ``eps`` around ``x``, takes the least-norm element ``g*`` and backtracks
    along ``-g*/||g*||``. When ``||g*|| <= nu`` or backtracking fails, both
    ``eps`` and ``nu`` shrink by ``shrink``; the run converges once ``eps``
    drops to ``eta``.
    """
    x = np.array(x0, dtype=float)
    n = x.size
    if sample_size is None:
        sample_size = 2 * n
    if sample_size < 0:
        raise ValueError("sample_size must be nonnegative")
    rng = np.random.default_rng(seed)
    counted = CountingOracle(oracle)
    report = RunReport(status=Status.ITER_CAP)
    hit = _target(f_star, tol)
    start = time.perf_counter()

    fx = counted.value(x)
    eps, nu = eps0, nu0
    if hit(fx):
        report.status, report.target_reached = Status.CONVERGED, True
        return _finish(report, counted, start, x, fx)

    for k in range(1, max_iters + 1):
        report.inner_iters = k
        rows = [counted.subgradient(x)]
        rows.extend(counted.subgradient(y) for y in _ball_sample(rng, x, eps, sample_size))
        sol = min_norm_point(np.vstack(rows), tol_opt=tol_opt)

        moved = False
        if sol.norm > nu:
            d = -sol.g_star / sol.norm
            t = 1.0
            for _ in range(max_backtracks):
                trial = x + t * d
                f_trial = counted.value(trial)
                if f_trial <= fx - armijo * t * sol.norm:
                    x, fx, moved = trial, f_trial, True
                    break
                t *= backtrack
        if not moved:
            eps *= shrink
            nu *= shrink
            report.outer_iters += 1
            if eps <= eta:
                report.status = Status.CONVERGED
                break
        elif hit(fx):
            report.status, report.target_reached = Status.CONVERGED, True
            break
    return _finish(report, counted, start, x, fx)
