# polar.py
"""
Automatic thresholding of GLOSH scores.

1. knee: the point of the ascending score curve farthest from the chord between
   its first and last points.
2. inlier trend: least-squares line through the scores before the knee (x = rank).
3. adjusted threshold: the observed score in [knee, last] nearest to the line's
   value at the last rank.

A point is a potential outlier iff its score is strictly greater than the threshold.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from autoglosh import SortedScoreSequence, orthogonal_distances
from colors import print_colored, print_warning, Colors

COLLINEAR_TOL = 1e-12

@dataclass(frozen=True)
class PolarResult:
    knee_index: int
    knee_score: float
    beta0: Optional[float]
    beta1: Optional[float]
    r_extrapolated: Optional[float]
    adjusted_threshold: float
    labels_knee: np.ndarray
    labels_adjusted: np.ndarray
    knee_degenerate: bool = False

def _values(scores) -> np.ndarray:
    return scores.values if isinstance(scores, SortedScoreSequence) else np.asarray(scores, dtype=np.float64)

def find_knee(scores) -> Tuple[int, float, bool]:
    """Returns (knee_index, knee_score, degenerate)."""
    s = _values(scores)
    n = s.shape[0]
    if n < 3:
        raise ValueError(f"Knee search needs at least 3 scores, got {n}")
    xs = np.arange(1, n - 1, dtype=np.float64)
    orth = orthogonal_distances(xs, s[1:n - 1], (0.0, s[0]), (n - 1.0, s[n - 1]))
    if orth.max() <= COLLINEAR_TOL:
        # flat or perfectly linear curve: no knee
        return n - 1, float(s[n - 1]), True
    k = 1 + int(np.argmax(orth))
    return k, float(s[k]), False

def fit_inlier_trend(scores, knee_index: int) -> Tuple[float, float]:
    """Ordinary least squares of score on rank over ranks 0..knee_index-1."""
    if knee_index < 2:
        raise ValueError(f"Need at least 2 scores before the knee to fit a trend, got {knee_index}")
    y = _values(scores)[:knee_index]
    x = np.arange(knee_index, dtype=np.float64)
    x_mean = x.mean()
    y_mean = y.mean()
    dx = x - x_mean
    beta1 = float(np.dot(dx, y - y_mean) / np.dot(dx, dx))
    beta0 = float(y_mean - beta1 * x_mean)
    return beta0, beta1

def adjusted_threshold(scores, knee_index: int, beta0: Optional[float], beta1: Optional[float]) -> Tuple[Optional[float], float]:
    """Returns (r_extrapolated, adjusted_threshold)."""
    s = _values(scores)
    n = s.shape[0]
    if beta0 is None or beta1 is None:
        return None, float(s[knee_index])
    r = beta0 + beta1 * (n - 1)
    candidates = s[knee_index:]
    gaps = np.abs(candidates - r)
    # ascending candidates: first minimum is the smaller score
    return float(r), float(candidates[int(np.argmin(gaps))])

def label(scores, threshold: float) -> np.ndarray:
    """True = potential outlier (score strictly above the threshold)."""
    return np.asarray(scores, dtype=np.float64) > threshold

def polar(scores, notes: list = None) -> PolarResult:
    """Run knee search, trend fit and threshold adjustment on per-point scores."""
    per_point = np.asarray(scores, dtype=np.float64)
    ordered = SortedScoreSequence.from_scores(per_point)
    knee_index, knee_score, degenerate = find_knee(ordered)
    if degenerate:
        print_warning("sorted scores are flat or linear; knee is degenerate and no point is labelled", notes)
    if knee_index >= 2:
        beta0, beta1 = fit_inlier_trend(ordered, knee_index)
    else:
        beta0 = beta1 = None
        print_warning("too few scores before the knee for a trend fit; using the knee score", notes)
    r, threshold = adjusted_threshold(ordered, knee_index, beta0, beta1)
    result = PolarResult(knee_index, knee_score, beta0, beta1, r, threshold,
                         label(per_point, knee_score), label(per_point, threshold), degenerate)
    print_colored(f"Knee score {knee_score:.6g} ({int(result.labels_knee.sum())} potential outliers), "
                  f"adjusted threshold {threshold:.6g} ({int(result.labels_adjusted.sum())})", Colors.RESULT)
    return result
