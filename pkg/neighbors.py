# neighbors.py
"""
Pairwise distances and core distances for every min_pts in [2, m_max].

The point itself counts as its own first neighbor, so core distance at
min_pts = 2 is the distance to the nearest other point.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from colors import print_colored, print_warning, Colors
from dataset import Dataset

METRICS = {"euclidean": "euclidean", "manhattan": "cityblock"}

@dataclass(frozen=True)
class DistanceMatrix:
    dist: np.ndarray
    metric: str = "euclidean"

    @property
    def n(self) -> int:
        return self.dist.shape[0]

@dataclass(frozen=True)
class CoreDistanceTable:
    core: np.ndarray        # n x (m_max - 1); core[i, m - 2] = eps_c(x_i) at min_pts = m
    m_max: int
    neighbor_order: np.ndarray  # n x m_max point ids sorted by (distance, id), self usually first

    @property
    def n(self) -> int:
        return self.core.shape[0]

    def at(self, min_pts: int) -> np.ndarray:
        """Core distances of all points for one min_pts value."""
        if not 2 <= min_pts <= self.m_max:
            raise ValueError(f"min_pts={min_pts} outside the table range [2, {self.m_max}]")
        return self.core[:, min_pts - 2]

def pairwise_distances(data: Dataset, metric: str = "euclidean") -> DistanceMatrix:
    if metric not in METRICS:
        raise ValueError(f"Unknown metric {metric!r}; choose one of {sorted(METRICS)}")
    # squareform of the condensed form is exactly symmetric with a zero diagonal
    dist = squareform(pdist(data.points, metric=METRICS[metric]))
    dist.setflags(write=False)
    return DistanceMatrix(dist, metric)

def resolve_m_max(requested: int, n: int, sink: list = None) -> int:
    """Clamp a requested m_max to the point count, warning when it had to shrink."""
    if requested < 2:
        raise ValueError(f"m_max must be at least 2, got {requested}")
    if requested > n:
        print_warning(f"m_max={requested} exceeds the number of points; clamped to {n}", sink)
        return n
    return requested

def core_distance_table(dist: DistanceMatrix, m_max: int) -> CoreDistanceTable:
    n = dist.n
    if not 2 <= m_max <= n:
        raise ValueError(f"m_max={m_max} out of range [2, {n}]")

    # stable sort: equal distances keep ascending point id
    order = np.argsort(dist.dist, axis=1, kind="stable")[:, :m_max]
    sorted_dist = np.take_along_axis(dist.dist, order, axis=1)
    core = np.ascontiguousarray(sorted_dist[:, 1:m_max])
    core.setflags(write=False)
    order = np.ascontiguousarray(order)
    order.setflags(write=False)
    print_colored(f"Core distances computed for min_pts in [2, {m_max}] over {n} points", Colors.INFO)
    return CoreDistanceTable(core, m_max, order)
