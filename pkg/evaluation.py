# evaluation.py
"""
Detection quality against ground truth.

- precision_at_n: fraction of true outliers among the n top-scored points
  (n defaults to the number of true outliers). Score ties at the cut are
  credited by expected value over all orderings of the tied points.
- threshold_metrics: confusion counts, precision, recall, F-measure, G-Mean.
- precision_profile: P@n at every min_pts of a GLOSH profile matrix.
- best_threshold_metrics: the strict threshold with the highest F-measure.
"""

from dataclasses import asdict, dataclass
from typing import Optional, Tuple

import numpy as np
from sklearn.metrics import confusion_matrix, f1_score, precision_score, recall_score

from dataset import GroundTruth
from glosh import GloshProfileMatrix

@dataclass(frozen=True)
class MetricsReport:
    precision: float
    recall: float
    f_measure: float
    g_mean: float
    specificity: float
    tp: int
    fp: int
    tn: int
    fn: int
    precision_at_n: Optional[float] = None
    n_used: Optional[int] = None

    def to_dict(self) -> dict:
        return asdict(self)

@dataclass(frozen=True)
class PrecisionProfile:
    min_pts: np.ndarray
    values: np.ndarray
    best_min_pts: int
    best_value: float

    def to_dict(self) -> dict:
        return {"min_pts": [int(m) for m in self.min_pts], "precision_at_n": [float(v) for v in self.values],
                "best_min_pts": self.best_min_pts, "best_precision_at_n": self.best_value}

def _check_truth(values: np.ndarray, truth: Optional[GroundTruth]) -> np.ndarray:
    if truth is None:
        raise ValueError("Ground truth is required for evaluation")
    if values.shape[0] != len(truth):
        raise ValueError(f"Length mismatch: {values.shape[0]} predictions vs {len(truth)} ground-truth labels")
    return truth.labels

def precision_at_n(scores, truth: Optional[GroundTruth], n: Optional[int] = None) -> float:
    s = np.asarray(scores, dtype=np.float64)
    labels = _check_truth(s, truth)
    if n is None:
        n = truth.outlier_count
    if not 1 <= n <= s.shape[0]:
        raise ValueError(f"n={n} out of range [1, {s.shape[0]}]")
    cut = np.sort(s)[::-1][n - 1]
    above = s > cut
    tied = s == cut
    slots = n - int(np.count_nonzero(above))
    credit = np.count_nonzero(labels & above) + np.count_nonzero(labels & tied) * slots / np.count_nonzero(tied)
    return float(credit / n)

def threshold_metrics(labels, truth: Optional[GroundTruth]) -> MetricsReport:
    pred = np.asarray(labels, dtype=bool)
    actual = _check_truth(pred, truth)
    tn, fp, fn, tp = (int(c) for c in confusion_matrix(actual, pred, labels=[False, True]).ravel())
    precision = float(precision_score(actual, pred, zero_division=0))
    recall = float(recall_score(actual, pred, zero_division=0))
    f_measure = float(f1_score(actual, pred, zero_division=0))
    specificity = tn / (tn + fp) if tn + fp else 0.0
    g_mean = float(np.sqrt(recall * specificity))
    return MetricsReport(precision, recall, f_measure, g_mean, specificity, tp, fp, tn, fn)

def with_precision_at_n(report: MetricsReport, scores, truth: GroundTruth) -> MetricsReport:
    """Attach P@n (n = true outlier count) to a threshold report."""
    if truth.outlier_count == 0:
        return report
    values = dict(report.to_dict(), precision_at_n=precision_at_n(scores, truth), n_used=truth.outlier_count)
    return MetricsReport(**values)

def precision_profile(profiles: GloshProfileMatrix, truth: GroundTruth) -> PrecisionProfile:
    m_values = np.arange(2, profiles.m_max + 1)
    values = np.array([precision_at_n(profiles.scores_at(int(m)), truth) for m in m_values])
    best = int(np.argmax(values))
    return PrecisionProfile(m_values, values, int(m_values[best]), float(values[best]))

def best_threshold_metrics(scores, truth: GroundTruth) -> Tuple[float, MetricsReport]:
    """Scan every observed score as a strict threshold; keep the best F-measure (lowest threshold on ties)."""
    s = np.asarray(scores, dtype=np.float64)
    best_t, best_report = None, None
    for t in np.unique(s):
        report = threshold_metrics(s > t, truth)
        if best_report is None or report.f_measure > best_report.f_measure:
            best_t, best_report = float(t), report
    return best_t, best_report
