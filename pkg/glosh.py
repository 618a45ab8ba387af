# glosh.py
"""
GLOSH outlier scores from a mutual-reachability MST, and GLOSH-Profiles
over the min_pts range [2, m_max].

min_pts doubles as the minimum cluster size. MST edges are swept in ascending
order; a point stays pending while its component has fewer than min_pts
members and departs at the edge that first grows it to min_pts or more. That
merged component is the point's cluster C_x, and lambda_max(C_x) comes from
its smallest core distance. At min_pts = 2 every point departs at its first
MST attachment.

lambda modes:
- core_distance   (default)  score = 1 - comp_min_core / eps_c(x)
- departure_level            score = 1 - comp_min_core / attach_level(x)

attach_level(x) is the weight of the departing edge.

Degenerate conventions: a zero denominator (duplicate points) gives 0, a zero
numerator with a positive denominator gives 1.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd
from numba import njit

from colors import print_colored, Colors
from dataset import Dataset
from file_utils import write_csv
from mstgraph import (CoreSg, MstEdges, build_core_sg, find_root, mst_complete,
                      mst_from_core_sg, union_roots)
from neighbors import CoreDistanceTable, DistanceMatrix, core_distance_table, pairwise_distances

LAMBDA_MODES = ("core_distance", "departure_level")

@njit(nogil=True)
def _departure_sweep(n, u, v, w, core_m, min_cluster_size):
    parent = np.arange(n)
    size = np.ones(n, dtype=np.int64)
    comp_min = core_m.copy()
    # pending members (not yet departed) per root, as a linked list
    head = np.arange(n)
    tail = np.arange(n)
    nxt = np.full(n, -1, dtype=np.int64)
    depart = np.empty(n, dtype=np.float64)
    cmin = np.empty(n, dtype=np.float64)
    for i in range(u.shape[0]):
        ru = find_root(parent, u[i])
        rv = find_root(parent, v[i])
        merged = min(comp_min[ru], comp_min[rv])
        if head[ru] < 0:
            h, t = head[rv], tail[rv]
        elif head[rv] < 0:
            h, t = head[ru], tail[ru]
        else:
            nxt[tail[ru]] = head[rv]
            h, t = head[ru], tail[rv]
        root = union_roots(parent, size, ru, rv)
        comp_min[root] = merged
        if size[root] >= min_cluster_size:
            x = h
            while x >= 0:
                depart[x] = w[i]
                cmin[x] = merged
                x = nxt[x]
            h = -1
            t = -1
        head[root] = h
        tail[root] = t
    return depart, cmin

@dataclass(frozen=True)
class GloshScores:
    scores: np.ndarray
    min_pts: int
    attach_level: np.ndarray
    comp_min_core: np.ndarray
    lambda_mode: str = "core_distance"

@dataclass(frozen=True)
class GloshProfileMatrix:
    profiles: np.ndarray    # n x (m_max - 1); column m - 2 holds scores at min_pts = m
    m_max: int
    lambda_mode: str = "core_distance"

    def scores_at(self, min_pts: int) -> np.ndarray:
        if not 2 <= min_pts <= self.m_max:
            raise ValueError(f"min_pts={min_pts} outside the profile range [2, {self.m_max}]")
        return self.profiles[:, min_pts - 2]

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.profiles, columns=[f"minpts_{m}" for m in range(2, self.m_max + 1)])
        frame.insert(0, "point_id", np.arange(self.profiles.shape[0]))
        return frame

def _ratio_score(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    scores = np.zeros_like(den)
    positive = den > 0
    np.divide(num, den, out=scores, where=positive)
    scores[positive] = 1.0 - scores[positive]
    return scores

def glosh_scores(mst: MstEdges, core: CoreDistanceTable, min_pts: int,
                 lambda_mode: str = "core_distance", min_cluster_size: Optional[int] = None) -> GloshScores:
    """min_cluster_size defaults to min_pts; 2 scores every point against its first-attachment component."""
    if lambda_mode not in LAMBDA_MODES:
        raise ValueError(f"Unknown lambda mode {lambda_mode!r}; choose one of {LAMBDA_MODES}")
    if mst.min_pts != min_pts:
        raise ValueError(f"MST was computed at min_pts={mst.min_pts}, scores requested at {min_pts}")
    n = core.n
    if mst.n_edges != n - 1:
        raise ValueError(f"MST has {mst.n_edges} edges, expected {n - 1}")
    cluster_size = min_pts if min_cluster_size is None else min_cluster_size
    if cluster_size < 2:
        raise ValueError(f"min_cluster_size must be >= 2, got {cluster_size}")

    core_m = np.ascontiguousarray(core.at(min_pts))
    order = np.lexsort((mst.v, mst.u, mst.w))
    attach, cmin = _departure_sweep(n, np.ascontiguousarray(mst.u[order]), np.ascontiguousarray(mst.v[order]),
                                    np.ascontiguousarray(mst.w[order]), core_m, min(cluster_size, n))
    den = core_m if lambda_mode == "core_distance" else attach
    return GloshScores(_ratio_score(cmin, den), min_pts, attach, cmin, lambda_mode)

def profile_matrix_from_graph(dist: DistanceMatrix, core: CoreDistanceTable, sg: Optional[CoreSg] = None,
                              lambda_mode: str = "core_distance", threads: int = 1,
                              min_cluster_size: Optional[int] = None) -> GloshProfileMatrix:
    """
    Stack GLOSH scores for min_pts = 2..m_max. With a CoreSg the MSTs come from
    the sparse graph, otherwise from the complete graph.
    """
    m_max = core.m_max if sg is None else sg.m_max

    def column(m):
        mst = mst_complete(dist, core, m) if sg is None else mst_from_core_sg(sg, core, m)
        return glosh_scores(mst, core, m, lambda_mode, min_cluster_size).scores

    m_values = range(2, m_max + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            columns = list(pool.map(column, m_values))
    else:
        columns = [column(m) for m in m_values]
    profiles = np.column_stack(columns)
    profiles.setflags(write=False)
    return GloshProfileMatrix(profiles, m_max, lambda_mode)

def glosh_profile_matrix(data: Dataset, m_max: int, lambda_mode: str = "core_distance",
                         metric: str = "euclidean", naive: bool = False, threads: int = 1,
                         min_cluster_size: Optional[int] = None) -> GloshProfileMatrix:
    if not 2 <= m_max <= data.n:
        raise ValueError(f"m_max={m_max} out of range [2, {data.n}]")
    dist = pairwise_distances(data, metric)
    core = core_distance_table(dist, m_max)
    sg = None if naive else build_core_sg(dist, core, m_max)
    matrix = profile_matrix_from_graph(dist, core, sg, lambda_mode, threads, min_cluster_size)
    print_colored(f"GLOSH profiles: {data.n} points x {m_max - 1} min_pts values", Colors.INFO)
    return matrix

def write_profile_csv(matrix: GloshProfileMatrix, path: str) -> str:
    return write_csv(path, matrix.to_frame())
