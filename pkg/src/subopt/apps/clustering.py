"""Hard clustering as a nonsmooth objective over the stacked centers.

``f(X) = (1/m) sum_i min_j ||a_i - x_j||^2`` with squared Euclidean
distances. Ties in the inner minimum go to the lowest center index.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..core import Vector


class DataFormatError(ValueError):
    """Base class for CSV ingestion errors; ``row`` is 1-based (0 for the file)."""

    def __init__(self, message: str, row: int):
        super().__init__(f"row {row}: {message}" if row else message)
        self.row = row


class RaggedRowError(DataFormatError):
    pass


class NonNumericError(DataFormatError):
    pass


class EmptyDataError(DataFormatError):
    pass


@dataclass(frozen=True)
class Dataset:
    points: np.ndarray  # (m, dim)

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.ndim != 2 or pts.shape[0] < 1:
            raise ValueError("a dataset needs at least one point")
        object.__setattr__(self, "points", pts)

    @property
    def m(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def flatten_centers(centers) -> Vector:
    return np.asarray(centers, dtype=float).reshape(-1).copy()


def unflatten_centers(x: Vector, dim: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if dim < 1 or x.size % dim:
        raise ValueError(f"vector of length {x.size} does not split into centers of dimension {dim}")
    return x.reshape(-1, dim).copy()


def _sq_distances(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - centers[None, :, :]
    return np.einsum("mkd,mkd->mk", diff, diff)


class ClusterObjective:
    """Oracle for ``f_kappa``; the decision vector is the row-major center matrix."""

    def __init__(self, data: Dataset, kappa: int):
        if int(kappa) != kappa or kappa < 1:
            raise ValueError("kappa must be a positive integer")
        self.data = data
        self.kappa = int(kappa)
        self.dimension = data.dim * self.kappa

    def _centers(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dimension,):
            raise ValueError(f"decision vector has shape {x.shape}, expected ({self.dimension},)")
        return x.reshape(self.kappa, self.data.dim)

    def value(self, x) -> float:
        d2 = _sq_distances(self.data.points, self._centers(x))
        return float(np.mean(d2.min(axis=1)))

    def subgradient(self, x) -> Vector:
        centers = self._centers(x)
        labels = np.argmin(_sq_distances(self.data.points, centers), axis=1)
        g = np.zeros_like(centers)
        for j in range(self.kappa):
            mine = self.data.points[labels == j]
            if len(mine):
                g[j] = 2.0 * (len(mine) * centers[j] - mine.sum(axis=0)) / self.data.m
        return g.reshape(-1)


def cluster_objective(data: Dataset, kappa: int) -> ClusterObjective:
    return ClusterObjective(data, kappa)


@dataclass(frozen=True)
class Assignment:
    labels: np.ndarray  # center index per point, 0-based
    sizes: np.ndarray
    empty: tuple[int, ...]  # centers that claim no point


def assign_clusters(centers, data: Dataset) -> Assignment:
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    if centers.shape[1] != data.dim:
        centers = unflatten_centers(centers.reshape(-1), data.dim)
    labels = np.argmin(_sq_distances(data.points, centers), axis=1)
    sizes = np.bincount(labels, minlength=len(centers))
    return Assignment(labels, sizes, tuple(int(j) for j in np.flatnonzero(sizes == 0)))


def load_points_csv(path) -> Dataset:
    """Read comma-separated real rows; blank lines are skipped."""
    rows: list[list[float]] = []
    width = None
    with open(Path(path), newline="") as fh:
        for lineno, record in enumerate(csv.reader(fh), start=1):
            if not record or all(not field.strip() for field in record):
                continue
            try:
                values = [float(field) for field in record]
            except ValueError:
                raise NonNumericError(f"non-numeric field in {record!r}", lineno) from None
            if not all(np.isfinite(values)):
                raise NonNumericError(f"non-finite field in {record!r}", lineno)
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise RaggedRowError(f"expected {width} fields, found {len(values)}", lineno)
            rows.append(values)
    if not rows:
        raise EmptyDataError(f"{path} holds no data rows", 0)
    return Dataset(np.array(rows))


def make_blobs(m: int = 300, centers=((0.0, 0.0), (5.0, 5.0), (-5.0, 5.0)), spread: float = 1.0,
               seed: int = 0) -> Dataset:
    """Gaussian blobs with ``m`` points split as evenly as possible."""
    centers = np.asarray(centers, dtype=float)
    rng = np.random.default_rng(seed)
    counts = np.full(len(centers), m // len(centers))
    counts[: m % len(centers)] += 1
    pts = [c + spread * rng.standard_normal((k, centers.shape[1])) for c, k in zip(centers, counts)]
    return Dataset(np.vstack(pts))


def random_centers(data: Dataset, kappa: int, seed: int) -> Vector:
    """Starting centers: ``kappa`` distinct data points chosen at random."""
    rng = np.random.default_rng(seed)
    idx = rng.choice(data.m, size=kappa, replace=data.m < kappa)
    return flatten_centers(data.points[idx])
