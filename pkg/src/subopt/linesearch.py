"""Two-point line search.

Two step lengths run side by side. A bracketed trial step inside ``(0, eps]``
probes for subgradients, and a geometrically shrinking step probes for
sufficient decrease. The search stops with either a descent step or a
subgradient that enlarges the working bundle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import LineSearchStalled, ObjectiveOracle, SolverParams, Vector


@dataclass
class Descent:
    point: Vector
    step: float
    f_point: float
    iterations: int
    bracket: tuple[float, float]
    brackets: list[tuple[float, float]] = field(default_factory=list, repr=False)

    indicator = 1


@dataclass
class NullStep:
    subgradient: Vector
    trial: float
    iterations: int
    bracket: tuple[float, float]
    brackets: list[tuple[float, float]] = field(default_factory=list, repr=False)

    indicator = 0


LineSearchOutcome = Descent | NullStep


def bar_t_schedule(t0: float, p: int, i: int) -> float:
    """Descent step for iteration ``i``: 1 at ``i = 0``, then ``t0 ** (i / p)``."""
    if not 0.0 < t0 < 1.0:
        raise ValueError("t0 must lie in (0,1)")
    if i == 0:
        return 1.0
    return math.exp(math.log(t0) / p) ** i


def next_trial(t_l: float, t_u: float, zeta: float) -> float:
    """Midpoint of the bracket; admissible for any ``zeta < 0.5``."""
    return 0.5 * (t_l + t_u)


def two_point_line_search(oracle: ObjectiveOracle, eps: float, x: Vector, g_star: Vector,
                          params: SolverParams, fx: float | None = None,
                          record_brackets: bool = False) -> LineSearchOutcome:
    """Search along ``d = -g*/||g*||`` from ``x``.

    ``fx`` is f(x) when the caller already knows it; otherwise it is evaluated
    once. Each iteration costs two function values and one subgradient.
    """
    gnorm = float(np.linalg.norm(g_star))
    if not gnorm > 0.0:
        raise ValueError("g_star must be nonzero")
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0,1)")
    d = -np.asarray(g_star, dtype=float) / gnorm
    if fx is None:
        fx = oracle.value(x)

    beta1, beta2 = params.beta1, params.beta2
    tbar = params.tbar(eps)
    t0 = params.t0(eps)
    t = t0
    bar_t = 1.0
    xi = oracle.subgradient(x + t0 * d)
    t_l, t_u = 0.0, eps
    brackets = [(t_l, t_u)] if record_brackets else []
    i = 0
    while True:
        if i >= params.max_linesearch_iters:
            raise LineSearchStalled(i, (t_l, t_u))
        if oracle.value(x + t * d) - fx <= -beta1 * t * gnorm:
            t_l = t
        else:
            t_u = t
        if record_brackets:
            brackets.append((t_l, t_u))

        s = x + bar_t * d
        f_s = oracle.value(s)
        if f_s - fx <= -beta1 * bar_t * gnorm and bar_t >= tbar:
            assert bar_t >= tbar and f_s - fx <= -beta1 * bar_t * gnorm
            return Descent(s, bar_t, f_s, i + 1, (t_l, t_u), brackets)

        if xi @ d >= -beta2 * gnorm:
            assert 0.0 < t <= eps and xi @ d >= -beta2 * gnorm
            return NullStep(xi, t, i + 1, (t_l, t_u), brackets)

        t = next_trial(t_l, t_u, params.zeta)
        bar_t = bar_t_schedule(t0, params.p, i + 1)
        xi = oracle.subgradient(x + t * d)
        i += 1
