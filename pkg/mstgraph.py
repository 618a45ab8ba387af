# mstgraph.py
"""
Mutual-reachability minimum spanning trees.

Two ways to get MST_min_pts:
- mst_complete: Prim over the implicit complete graph (dense key arrays), O(n^2) per min_pts.
- mst_from_core_sg: Kruskal over the sparse CORE-SG built once at m_max
  (MST_m_max edges plus every point's m_max-nearest-neighbor edges).

Edges are totally ordered by (w, min(u, v), max(u, v)). Under that order the MST is
unique, so both paths return the same edge list, sorted ascending in that order.
"""

from dataclasses import dataclass

import numpy as np
import pandas as pd
from numba import njit

from colors import print_colored, Colors
from file_utils import write_csv
from neighbors import CoreDistanceTable, DistanceMatrix

# --- union-find kernels (shared with glosh) ---

@njit(nogil=True)
def find_root(parent, x):
    """Find with path compression"""
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root

@njit(nogil=True)
def union_roots(parent, size, rx, ry):
    """Union by size of two distinct roots; returns the surviving root."""
    if size[rx] < size[ry]:
        rx, ry = ry, rx
    parent[ry] = rx
    size[rx] += size[ry]
    return rx

@njit(nogil=True)
def _edge_precedes(w1, a1, b1, w2, a2, b2):
    if w1 != w2:
        return w1 < w2
    if a1 != a2:
        return a1 < a2
    return b1 < b2

@njit(nogil=True)
def _prim_kernel(dist, core_m):
    n = dist.shape[0]
    in_tree = np.zeros(n, dtype=np.bool_)
    key = np.empty(n, dtype=np.float64)
    key_a = np.empty(n, dtype=np.int64)
    key_b = np.empty(n, dtype=np.int64)
    key[:] = np.inf
    key_a[:] = n
    key_b[:] = n
    src = np.empty(n - 1, dtype=np.int64)
    dst = np.empty(n - 1, dtype=np.int64)
    wts = np.empty(n - 1, dtype=np.float64)

    current = 0
    in_tree[0] = True
    for step in range(n - 1):
        cc = core_m[current]
        for v in range(n):
            if in_tree[v]:
                continue
            w = max(max(cc, core_m[v]), dist[current, v])
            a = min(current, v)
            b = max(current, v)
            if _edge_precedes(w, a, b, key[v], key_a[v], key_b[v]):
                key[v] = w
                key_a[v] = a
                key_b[v] = b
        best = -1
        for v in range(n):
            if in_tree[v]:
                continue
            if best < 0 or _edge_precedes(key[v], key_a[v], key_b[v], key[best], key_a[best], key_b[best]):
                best = v
        in_tree[best] = True
        src[step] = key_a[best]
        dst[step] = key_b[best]
        wts[step] = key[best]
        current = best
    return src, dst, wts

@njit(nogil=True)
def _kruskal_kernel(n, u, v, w):
    # u, v, w already sorted by (w, u, v)
    parent = np.arange(n)
    size = np.ones(n, dtype=np.int64)
    src = np.empty(n - 1, dtype=np.int64)
    dst = np.empty(n - 1, dtype=np.int64)
    wts = np.empty(n - 1, dtype=np.float64)
    count = 0
    for i in range(u.shape[0]):
        ru = find_root(parent, u[i])
        rv = find_root(parent, v[i])
        if ru != rv:
            union_roots(parent, size, ru, rv)
            src[count] = u[i]
            dst[count] = v[i]
            wts[count] = w[i]
            count += 1
            if count == n - 1:
                break
    return src[:count], dst[:count], wts[:count]

# --- types ---

@dataclass(frozen=True)
class MstEdges:
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    min_pts: int

    @property
    def n_edges(self) -> int:
        return self.u.shape[0]

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.w))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"u": self.u, "v": self.v, "w": self.w})

@dataclass(frozen=True)
class CoreSg:
    u: np.ndarray   # u < v
    v: np.ndarray
    d: np.ndarray   # raw distances; weights are recomputed per min_pts
    m_max: int
    n: int

    @property
    def n_edges(self) -> int:
        return self.u.shape[0]

def _canonical(src, dst, wts, min_pts: int) -> MstEdges:
    a = np.minimum(src, dst)
    b = np.maximum(src, dst)
    order = np.lexsort((b, a, wts))
    return MstEdges(a[order], b[order], wts[order], min_pts)

def _check_min_pts(core: CoreDistanceTable, min_pts: int):
    if not 2 <= min_pts <= core.m_max:
        raise ValueError(f"min_pts={min_pts} outside the core table range [2, {core.m_max}]")

def mutual_reachability(dist: DistanceMatrix, core: CoreDistanceTable, min_pts: int, u: int, v: int) -> float:
    _check_min_pts(core, min_pts)
    core_m = core.at(min_pts)
    return float(max(core_m[u], core_m[v], dist.dist[u, v]))

def mst_complete(dist: DistanceMatrix, core: CoreDistanceTable, min_pts: int) -> MstEdges:
    _check_min_pts(core, min_pts)
    core_m = np.ascontiguousarray(core.at(min_pts))
    src, dst, wts = _prim_kernel(np.ascontiguousarray(dist.dist), core_m)
    return _canonical(src, dst, wts, min_pts)

def build_core_sg(dist: DistanceMatrix, core: CoreDistanceTable, m_max: int) -> CoreSg:
    n = dist.n
    if not 2 <= m_max <= core.m_max:
        raise ValueError(f"m_max={m_max} outside the core table range [2, {core.m_max}]")
    mst = mst_complete(dist, core, m_max)

    order = core.neighbor_order[:, :m_max]
    rows = np.repeat(np.arange(n, dtype=np.int64), order.shape[1])
    cols = order.ravel().astype(np.int64)
    keep = rows != cols
    rows, cols = rows[keep], cols[keep]

    a = np.concatenate([np.minimum(rows, cols), mst.u])
    b = np.concatenate([np.maximum(rows, cols), mst.v])
    keys = np.unique(a * n + b)
    u, v = keys // n, keys % n
    d = np.ascontiguousarray(dist.dist[u, v])
    print_colored(f"CORE-SG built at m_max={m_max}: {keys.size} edges", Colors.INFO)
    return CoreSg(u, v, d, m_max, n)

def mst_from_core_sg(sg: CoreSg, core: CoreDistanceTable, min_pts: int) -> MstEdges:
    if min_pts > sg.m_max:
        raise ValueError(f"min_pts={min_pts} exceeds the CORE-SG m_max={sg.m_max}")
    _check_min_pts(core, min_pts)
    core_m = core.at(min_pts)
    w = np.maximum(np.maximum(core_m[sg.u], core_m[sg.v]), sg.d)
    order = np.lexsort((sg.v, sg.u, w))
    src, dst, wts = _kruskal_kernel(sg.n, np.ascontiguousarray(sg.u[order]),
                                    np.ascontiguousarray(sg.v[order]), np.ascontiguousarray(w[order]))
    if src.shape[0] != sg.n - 1:
        raise ValueError(f"CORE-SG is disconnected: only {src.shape[0]} of {sg.n - 1} MST edges found")
    return MstEdges(src, dst, wts, min_pts)

def dump_mst_csv(mst: MstEdges, path: str) -> str:
    """Debug dump of an MST as `u,v,w` rows."""
    return write_csv(path, mst.to_frame())
