"""Uniform (minimax) polynomial approximation.

``h(c) = max_{x in [a, b]} |p_c(x) - f(x)|`` with ``c = (c_n, ..., c_1, c_0)``.
The inner maximum is located on a uniform grid and polished by golden-section
search over the two cells next to the best grid point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..core import Vector

TARGETS: dict[str, tuple[Callable[[np.ndarray], np.ndarray], tuple[float, float]]] = {
    "sin2x": (lambda x: np.sin(2.0 * x), (-math.pi, math.pi)),
    "abs": (np.abs, (-1.0, 1.0)),
    "runge": (lambda x: 1.0 / (1.0 + 25.0 * x * x), (-1.0, 1.0)),
}

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def get_target(name: str):
    """``(function, default interval)`` for a registered target."""
    try:
        return TARGETS[name]
    except KeyError:
        raise KeyError(f"unknown target {name!r}; choose from {', '.join(TARGETS)}") from None


def _check_interval(interval) -> tuple[float, float]:
    a, b = (float(v) for v in interval)
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise ValueError(f"interval must satisfy a < b, got [{a}, {b}]")
    return a, b


def golden_max(fun: Callable[[float], float], lo: float, hi: float, tol: float = 1e-10,
               max_iter: int = 200) -> tuple[float, float]:
    """Maximize a scalar function on ``[lo, hi]`` until the bracket is ``<= tol`` wide."""
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = fun(x1), fun(x2)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = fun(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = fun(x2)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def inner_max(c, target, interval, grid_size: int = 2000, refine_tol: float = 1e-10,
              _grid=None, _target_vals=None) -> tuple[float, float]:
    """Locate ``max |p_c - f|`` on ``interval``; returns ``(x_star, value)``."""
    a, b = _check_interval(interval)
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    c = np.asarray(c, dtype=float)
    grid = np.linspace(a, b, grid_size) if _grid is None else _grid
    tv = target(grid) if _target_vals is None else _target_vals
    err = np.abs(np.polyval(c, grid) - tv)
    i = int(np.argmax(err))
    best_x, best_v = float(grid[i]), float(err[i])

    def abs_err(x):
        return abs(float(np.polyval(c, x)) - float(target(np.float64(x))))

    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid_size - 1)]
    x, v = golden_max(abs_err, float(lo), float(hi), refine_tol)
    if v > best_v:
        best_x, best_v = x, v
    return best_x, best_v


class ChebyshevObjective:
    """Oracle for ``h``; decision vector is ``(c_n, ..., c_0)``."""

    def __init__(self, target, interval, degree: int, grid_size: int = 2000, refine_tol: float = 1e-10):
        if int(degree) != degree or degree < 0:
            raise ValueError("degree must be a nonnegative integer")
        self.target = target
        self.interval = _check_interval(interval)
        self.degree = int(degree)
        self.dimension = self.degree + 1
        self.grid_size = int(grid_size)
        self.refine_tol = refine_tol
        self._grid = np.linspace(*self.interval, self.grid_size)
        self._tv = np.asarray(target(self._grid), dtype=float)
        if not np.all(np.isfinite(self._tv)):
            raise ValueError("target is not finite on the grid")

    def locate(self, c) -> tuple[float, float]:
        c = np.asarray(c, dtype=float)
        if c.shape != (self.dimension,):
            raise ValueError(f"coefficient vector has shape {c.shape}, expected ({self.dimension},)")
        return inner_max(c, self.target, self.interval, self.grid_size, self.refine_tol,
                         self._grid, self._tv)

    def value(self, c) -> float:
        return self.locate(c)[1]

    def subgradient(self, c) -> Vector:
        x, _ = self.locate(c)
        e = float(np.polyval(np.asarray(c, dtype=float), x)) - float(self.target(np.float64(x)))
        sign = 1.0 if e >= 0.0 else -1.0
        return sign * x ** np.arange(self.degree, -1, -1, dtype=float)


def cheby_objective(target, interval, degree: int, grid_size: int = 2000,
                    refine_tol: float = 1e-10) -> ChebyshevObjective:
    return ChebyshevObjective(target, interval, degree, grid_size, refine_tol)


@dataclass(frozen=True)
class Alternation:
    count: int
    points: np.ndarray  # abscissae of the alternating extrema
    signs: np.ndarray
    sup_error: float


def alternation_check(c, target, interval, tol: float = 1e-3, grid_size: int = 2000) -> Alternation:
    """Longest run of near-maximal error extrema with alternating signs.

    Scans ``10 * grid_size`` points; an extremum counts when ``|e|`` is within
    ``tol`` of the sup norm on that grid.
    """
    a, b = _check_interval(interval)
    x = np.linspace(a, b, 10 * grid_size)
    e = np.polyval(np.asarray(c, dtype=float), x) - target(x)
    ae = np.abs(e)
    sup = float(ae.max())
    left = np.concatenate(([-np.inf], ae[:-1]))
    right = np.concatenate((ae[1:], [-np.inf]))
    cand = np.flatnonzero((ae >= left) & (ae >= right) & (ae >= sup - tol))
    pts, signs = [], []
    for i in cand:
        s = 1.0 if e[i] >= 0.0 else -1.0
        if signs and signs[-1] == s:
            continue
        pts.append(x[i])
        signs.append(s)
    return Alternation(len(signs), np.array(pts), np.array(signs), sup)
