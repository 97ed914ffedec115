"""Application objectives: clustering and Chebyshev approximation."""

from .chebyshev import TARGETS, alternation_check, cheby_objective, get_target, inner_max
from .clustering import (Dataset, assign_clusters, cluster_objective, load_points_csv, make_blobs,
                         random_centers)

__all__ = [
    "TARGETS", "alternation_check", "cheby_objective", "get_target", "inner_max",
    "Dataset", "assign_clusters", "cluster_objective", "load_points_csv", "make_blobs",
    "random_centers",
]
