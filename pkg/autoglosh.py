# autoglosh.py
"""
Automatic min_pts selection.

The ORD-Profile holds the Pearson dissimilarity between sorted GLOSH score
sequences at consecutive min_pts values. m* is read off the elbow of that
profile: the point between its peak (B) and its last element (A) farthest from
the segment AB. With zero-based indices, m* = elbow_index + 3.
"""

from dataclasses import dataclass

import numpy as np
import pandas as pd

from colors import print_warning
from file_utils import write_csv
from glosh import GloshProfileMatrix

VARIANCE_TOL = 1e-12

@dataclass(frozen=True)
class SortedScoreSequence:
    values: np.ndarray
    min_pts: int = 0

    @classmethod
    def from_scores(cls, scores, min_pts: int = 0) -> "SortedScoreSequence":
        return cls(np.sort(np.asarray(scores, dtype=np.float64), kind="stable"), min_pts)

    def __len__(self):
        return self.values.shape[0]

@dataclass(frozen=True)
class OrdProfile:
    deltas: np.ndarray   # deltas[i] = dissimilarity(S_{i+2}, S_{i+3})
    m_max: int

    def to_frame(self) -> pd.DataFrame:
        pairs = [f"{i + 2}-{i + 3}" for i in range(self.deltas.shape[0])]
        return pd.DataFrame({"minpts_pair": pairs, "delta": self.deltas})

@dataclass(frozen=True)
class MinPtsSelection:
    m_star: int
    elbow_index: int
    peak_index: int
    orth_distances: np.ndarray   # orth_distances[k] belongs to index peak_index + k
    degenerate: bool = False

def _values(seq) -> np.ndarray:
    return seq.values if isinstance(seq, SortedScoreSequence) else np.asarray(seq, dtype=np.float64)

def pearson_dissimilarity(a, b) -> float:
    """
    1 - |Pearson correlation| with population moments.

    A sequence whose variance is at most VARIANCE_TOL counts as constant. The
    tolerance is absolute, so affine invariance only holds while the rescaled
    variances stay above it: shrinking GLOSH-range scores by a factor below
    about 1e-6 turns them into "constant" sequences.
    """
    x, y = _values(a), _values(b)
    if x.shape != y.shape:
        raise ValueError(f"Sequence length mismatch: {x.shape[0]} vs {y.shape[0]}")
    if x.shape[0] < 2:
        raise ValueError("Sequences need at least 2 values")
    dx = x - x.mean()
    dy = y - y.mean()
    var_x = np.mean(dx * dx)
    var_y = np.mean(dy * dy)
    flat_x, flat_y = var_x <= VARIANCE_TOL, var_y <= VARIANCE_TOL
    if flat_x and flat_y:
        return 0.0
    if flat_x or flat_y:
        return 1.0
    corr = np.mean(dx * dy) / np.sqrt(var_x * var_y)
    return float(min(1.0, max(0.0, 1.0 - abs(corr))))

def ord_profile(profiles: GloshProfileMatrix) -> OrdProfile:
    if profiles.m_max < 4:
        raise ValueError(f"m_max={profiles.m_max} too small for an ORD-Profile (need at least 4)")
    ordered = np.sort(profiles.profiles, axis=0)
    deltas = np.array([pearson_dissimilarity(ordered[:, i], ordered[:, i + 1])
                       for i in range(ordered.shape[1] - 1)])
    return OrdProfile(deltas, profiles.m_max)

def orthogonal_distances(xs: np.ndarray, ys: np.ndarray, a: tuple, b: tuple) -> np.ndarray:
    """|cross2(AD, AB)| / |AB| for every D = (xs[k], ys[k])."""
    ab_x, ab_y = b[0] - a[0], b[1] - a[1]
    norm = np.hypot(ab_x, ab_y)
    if norm == 0:
        return np.zeros_like(ys, dtype=np.float64)
    return np.abs((xs - a[0]) * ab_y - (ys - a[1]) * ab_x) / norm

def find_elbow(profile: OrdProfile, notes: list = None) -> MinPtsSelection:
    deltas = profile.deltas
    if deltas.shape[0] < 2:
        raise ValueError("ORD-Profile needs at least 2 dissimilarities to find an elbow")
    last = deltas.shape[0] - 1
    peak = int(np.argmax(deltas))       # first occurrence of the maximum

    idx = np.arange(peak, last + 1, dtype=np.float64)
    orth = orthogonal_distances(idx, deltas[peak:], (last, deltas[last]), (peak, deltas[peak]))
    if peak == last or np.all(deltas[peak:] == deltas[peak]):
        elbow, degenerate = peak, True
        print_warning("ORD-Profile is flat after its peak; using the peak as elbow", notes)
    else:
        elbow, degenerate = peak + int(np.argmax(orth)), False
    return MinPtsSelection(elbow + 3, elbow, peak, orth, degenerate)

def write_ord_csv(profile: OrdProfile, path: str) -> str:
    return write_csv(path, profile.to_frame())
