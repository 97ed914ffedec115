"""Least-norm point of the convex hull of a finite set of subgradients.

The active-set kernel is Wolfe's min-norm-point method. A compiled version is
used when available; ``SUBOPT_PURE_PYTHON=1`` forces the Python fallback.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _wolfe_py
from .core import ConvergenceError, Vector

_KERNELS = {"python": _wolfe_py.wolfe_weights}
try:
    if os.environ.get("SUBOPT_PURE_PYTHON") == "1":
        raise ImportError("pure-Python kernel forced")
    from . import _wolfe

    _KERNELS["cython"] = _wolfe.wolfe_weights
    BACKEND = "cython"
except ImportError:
    BACKEND = "python"

# Floor on the attainable residual, relative to the squared bundle scale.
_ROUNDOFF_FLOOR = 64 * np.finfo(float).eps


def available_backends() -> list[str]:
    return list(_KERNELS)


@dataclass
class Bundle:
    """Ordered working set of subgradients; every member has the same dimension."""

    members: list[Vector] = field(default_factory=list)

    def __post_init__(self):
        self.members = [np.asarray(g, dtype=float) for g in self.members]
        if self.members:
            n = self.members[0].shape
            if any(g.shape != n or g.ndim != 1 for g in self.members):
                raise ValueError("bundle members must be vectors of one dimension")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def append(self, g: Vector) -> None:
        g = np.asarray(g, dtype=float)
        if self.members and g.shape != self.members[0].shape:
            raise ValueError(f"member of shape {g.shape} does not match {self.members[0].shape}")
        self.members.append(g)

    def matrix(self) -> np.ndarray:
        if not self.members:
            raise ValueError("bundle is empty")
        return np.vstack(self.members)

    def copy(self) -> Bundle:
        return Bundle(list(self.members))


@dataclass
class MinNormSolution:
    g_star: Vector
    weights: Vector
    norm: float
    residual: float


def _as_matrix(bundle: Bundle | Sequence[Vector] | np.ndarray) -> np.ndarray:
    if isinstance(bundle, Bundle):
        P = bundle.matrix()
    else:
        P = np.atleast_2d(np.asarray(bundle, dtype=float))
    if P.size == 0:
        raise ValueError("bundle is empty")
    if not np.all(np.isfinite(P)):
        raise ValueError("bundle has non-finite coordinates")
    return P


def optimality_residual(P: np.ndarray, g: Vector) -> float:
    """``max_j (||g||^2 - p_j^T g)``; zero at the exact min-norm point."""
    return float(g @ g - np.min(P @ g))


def min_norm_point(bundle, tol_opt: float = 1e-12, backend: str | None = None,
                   max_iter: int | None = None) -> MinNormSolution:
    """Solve ``min ||g||`` over the convex hull of the bundle members.

    Returns the minimiser, its simplex weights and the optimality residual.
    Raises :class:`ConvergenceError` if the residual stays above both
    ``tol_opt`` and the round-off floor of the data.
    """
    P = _as_matrix(bundle)
    kernel = _KERNELS[backend or BACKEND]
    m = P.shape[0]
    if max_iter is None:
        max_iter = 10 * m + 50
    weights, status, _ = kernel(P, float(tol_opt), int(max_iter))
    g = weights @ P
    residual = optimality_residual(P, g)
    if residual > tol_opt:
        scale2 = float(np.max(np.einsum("ij,ij->i", P, P)))
        if residual > _ROUNDOFF_FLOOR * max(scale2, 1.0):
            raise ConvergenceError("min-norm point did not converge", residual)
    return MinNormSolution(g_star=g, weights=weights, norm=float(np.linalg.norm(g)), residual=residual)


def distance_to_hull(point: Vector, bundle, tol_opt: float = 1e-12) -> float:
    """Euclidean distance from ``point`` to the convex hull of the bundle."""
    P = _as_matrix(bundle)
    point = np.asarray(point, dtype=float)
    if point.shape != (P.shape[1],):
        raise ValueError(f"point of shape {point.shape} does not match dimension {P.shape[1]}")
    return min_norm_point(P - point, tol_opt=tol_opt).norm


def _simplex_grid(m: int, steps: int) -> Iterable[tuple[int, ...]]:
    for cuts in itertools.combinations(range(steps + m - 1), m - 1):
        prev = -1
        parts = []
        for c in cuts:
            parts.append(c - prev - 1)
            prev = c
        parts.append(steps + m - 2 - prev)
        yield tuple(parts)


def min_norm_oracle(bundle, grid_step: float = 1e-3, max_size: int = 5) -> Vector:
    """Brute-force min-norm point for tiny bundles.

    Scans an exhaustive simplex grid of the weights, then refines the best
    grid point by pairwise weight transfers with halving step until the step
    falls below ``grid_step``. Test-only; independent of the active-set path.
    """
    P = _as_matrix(bundle)
    m = P.shape[0]
    if m > max_size:
        raise ValueError(f"bundle of size {m} too large for the grid oracle (max {max_size})")
    if m == 1:
        return P[0].copy()

    steps = max(1, min(int(round(1.0 / grid_step)), {2: 1000, 3: 400, 4: 60, 5: 24}[m]))
    grid = np.array(list(_simplex_grid(m, steps)), dtype=float) / steps
    G = grid @ P
    lam = grid[int(np.argmin(np.einsum("ij,ij->i", G, G)))].copy()

    def sqnorm(weights):
        g = weights @ P
        return float(g @ g)

    best = sqnorm(lam)
    step = 1.0 / steps
    while step >= grid_step * 1e-3:
        improved = True
        while improved:
            improved = False
            for i, j in itertools.permutations(range(m), 2):
                move = min(step, lam[j])
                if move <= 0.0:
                    continue
                trial = lam.copy()
                trial[i] += move
                trial[j] -= move
                val = sqnorm(trial)
                if val < best:
                    lam, best, improved = trial, val, True
        step *= 0.5
    return lam @ P
