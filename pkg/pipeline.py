# pipeline.py
"""
End-to-end runs: Auto-GLOSH min_pts selection + POLAR labelling, synthetic
outlier generation, and evaluation of saved labels.

Commands write their artifacts and return the JSON-ready report dict:
- cmd_pipeline:  report.json, labels.csv (+ profile.csv, ord.csv, scores_sorted.csv)
- cmd_generate:  data CSV with features + label + kind
- cmd_evaluate:  metrics.json
"""

import os
import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from autoglosh import find_elbow, ord_profile, write_ord_csv
from colors import print_colored, Colors
from dataset import Dataset, GroundTruth, load_csv, load_labels, min_max_scale, read_table
from evaluation import (best_threshold_metrics, precision_at_n, precision_profile,
                        threshold_metrics, with_precision_at_n)
from file_utils import write_csv, write_json
from glosh import profile_matrix_from_graph, write_profile_csv
from mstgraph import build_core_sg
from neighbors import core_distance_table, pairwise_distances, resolve_m_max
from polar import polar
from synthgen import SyntheticOutlierSpec, generate, make_banana

SCHEMA_VERSION = "1.0"
DEFAULT_MMAX = 100

@dataclass(frozen=True)
class PipelineConfig:
    m_max: int = DEFAULT_MMAX
    metric: str = "euclidean"
    lambda_mode: str = "core_distance"
    scale: bool = False
    naive: bool = False
    seed: int = 0
    threads: int = 1
    timings: bool = False
    min_cluster_size: Optional[int] = None

    def echo(self) -> dict:
        # threads never changes results and stays out of the echo
        return {"m_max": self.m_max, "metric": self.metric, "lambda_mode": self.lambda_mode,
                "scale": self.scale, "naive": self.naive, "seed": self.seed,
                "min_cluster_size": self.min_cluster_size}

class StageError(Exception):
    """Wraps a failure with the name of the stage it happened in."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause

class _StageClock:
    def __init__(self):
        self.seconds = {}

    @contextmanager
    def stage(self, name: str):
        print_colored(f"[{name}]", Colors.STAGE, Colors.BOLD)
        start = time.perf_counter()
        try:
            yield
        except StageError:
            raise
        except Exception as e:
            raise StageError(name, e) from e
        self.seconds[name] = round(time.perf_counter() - start, 6)

def run_pipeline(data: Dataset, truth: Optional[GroundTruth] = None, config: PipelineConfig = PipelineConfig()) -> dict:
    """
    neighbors -> CORE-SG -> profiles -> ORD-Profile -> m* -> POLAR -> metrics.
    Returns {"report": ..., "profiles": ..., "ord": ..., "scores": ...}.
    """
    clock = _StageClock()
    notes = []

    if config.scale:
        with clock.stage("scale"):
            data = min_max_scale(data)

    with clock.stage("neighbors"):
        m_max = resolve_m_max(config.m_max, data.n, notes)
        dist = pairwise_distances(data, config.metric)
        core = core_distance_table(dist, m_max)

    sg = None
    if not config.naive:
        with clock.stage("core_sg"):
            sg = build_core_sg(dist, core, m_max)

    with clock.stage("profiles"):
        profiles = profile_matrix_from_graph(dist, core, sg, config.lambda_mode, config.threads,
                                             config.min_cluster_size)

    with clock.stage("selection"):
        ord_prof = ord_profile(profiles)
        selection = find_elbow(ord_prof, notes)
        scores = profiles.scores_at(selection.m_star)
        print_colored(f"Selected m* = {selection.m_star}", Colors.RESULT, Colors.BOLD)

    with clock.stage("polar"):
        result = polar(scores, notes)

    metrics = None
    if truth is not None:
        with clock.stage("metrics"):
            if len(truth) != data.n:
                raise ValueError(f"Ground truth has {len(truth)} labels for {data.n} points")
            metrics = {"knee": with_precision_at_n(threshold_metrics(result.labels_knee, truth), scores, truth).to_dict(),
                       "adjusted": with_precision_at_n(threshold_metrics(result.labels_adjusted, truth), scores, truth).to_dict()}
            if truth.outlier_count > 0:
                best_t, best = best_threshold_metrics(scores, truth)
                metrics["precision_at_n_mstar"] = precision_at_n(scores, truth)
                metrics["precision_profile"] = precision_profile(profiles, truth).to_dict()
                metrics["best_threshold"] = {"threshold": best_t, **best.to_dict()}
            print_colored(f"Recall knee={metrics['knee']['recall']:.3f} "
                          f"adjusted={metrics['adjusted']['recall']:.3f}", Colors.RESULT)

    report = {
        "schema_version": SCHEMA_VERSION,
        "config": dict(config.echo(), m_max_effective=m_max),
        "n_points": data.n,
        "n_features": data.d,
        "m_star": selection.m_star,
        "selection": {"elbow_index": selection.elbow_index, "peak_index": selection.peak_index,
                      "orth_distances": [float(x) for x in selection.orth_distances]},
        "degenerate_flags": {"elbow": selection.degenerate, "knee": result.knee_degenerate},
        "ord_profile": [float(x) for x in ord_prof.deltas],
        "knee_index": result.knee_index,
        "knee_score": result.knee_score,
        "beta0": result.beta0,
        "beta1": result.beta1,
        "r_extrapolated": result.r_extrapolated,
        "adjusted_threshold": result.adjusted_threshold,
        "outliers_knee": int(result.labels_knee.sum()),
        "outliers_adjusted": int(result.labels_adjusted.sum()),
        "points": [{"point_id": i, "score": float(s), "label_knee": int(k), "label_adjusted": int(a)}
                   for i, (s, k, a) in enumerate(zip(scores, result.labels_knee, result.labels_adjusted))],
        "warnings": notes,
    }
    if metrics is not None:
        report["metrics"] = metrics
    if config.timings:
        report["timings"] = clock.seconds
    return {"report": report, "profiles": profiles, "ord": ord_prof, "scores": scores, "polar": result}

def labels_frame(report: dict) -> pd.DataFrame:
    return pd.DataFrame(report["points"], columns=["point_id", "score", "label_knee", "label_adjusted"])

def cmd_pipeline(input_path: str, out_dir: str, config: PipelineConfig = PipelineConfig(),
                 label_column=None, has_header: bool = True, drop_columns: Sequence = (),
                 emit_profiles: bool = False) -> dict:
    print_colored("\n--- PIPELINE (Auto-GLOSH + POLAR) ---", Colors.INFO, Colors.BOLD)
    try:
        data, truth = load_csv(input_path, label_column=label_column, has_header=has_header,
                               drop_columns=drop_columns)
    except Exception as e:
        raise StageError("load", e) from e
    run = run_pipeline(data, truth, config)
    report = run["report"]
    report["config"]["input"] = os.path.basename(input_path)
    report["config"]["label_column"] = label_column
    report["config"]["drop_columns"] = [str(c) for c in drop_columns]

    write_json(os.path.join(out_dir, "report.json"), report)
    write_csv(os.path.join(out_dir, "labels.csv"), labels_frame(report))
    if emit_profiles:
        write_profile_csv(run["profiles"], os.path.join(out_dir, "profile.csv"))
        write_ord_csv(run["ord"], os.path.join(out_dir, "ord.csv"))
        ordered = np.sort(run["scores"])
        write_csv(os.path.join(out_dir, "scores_sorted.csv"),
                  pd.DataFrame({"rank": np.arange(ordered.shape[0]), "score": ordered}))
    return report

def cmd_generate(output_path: str, kind: str, count: Optional[int] = None, alpha: float = 5.0, seed: int = 0,
                 inliers_path: Optional[str] = None, banana: Optional[int] = None, has_header: bool = True,
                 drop_columns: Sequence = (), outliers_only: bool = False) -> dict:
    print_colored(f"\n--- GENERATE ({kind} outliers) ---", Colors.INFO, Colors.BOLD)
    if inliers_path is not None:
        inliers, _ = load_csv(inliers_path, has_header=has_header, drop_columns=drop_columns)
    elif banana is not None:
        inliers = make_banana(banana, seed=seed)
    else:
        raise ValueError("Either an inlier CSV or --banana N is required")

    spec = SyntheticOutlierSpec(kind, count if count is not None else SyntheticOutlierSpec.default_count(inliers.n),
                                alpha, seed)
    notes = []
    points, kinds = generate(inliers, spec, notes=notes)

    names = list(inliers.feature_names)
    out = pd.DataFrame(points, columns=names)
    out["label"] = 1
    out["kind"] = kinds
    if not outliers_only:
        base = pd.DataFrame(inliers.points, columns=names)
        base["label"] = 0
        base["kind"] = "inlier"
        out = pd.concat([base, out], ignore_index=True)
    write_csv(output_path, out)
    return {"schema_version": SCHEMA_VERSION, "kind": kind, "requested": spec.count, "generated": int(points.shape[0]),
            "alpha": alpha, "seed": seed, "warnings": notes,
            "kind_counts": {k: int(np.count_nonzero(kinds == k)) for k in sorted(set(kinds))}}

def cmd_evaluate(labels_path: str, truth_path: str, output_path: Optional[str] = None,
                 truth_column="label", prediction_columns: Sequence[str] = ("label_knee", "label_adjusted"),
                 score_column: str = "score") -> dict:
    print_colored("\n--- EVALUATE ---", Colors.INFO, Colors.BOLD)
    predictions = read_table(labels_path)
    truth = load_labels(truth_path, truth_column)
    if predictions.shape[0] != len(truth):
        raise ValueError(f"Row count mismatch: {predictions.shape[0]} predictions in {labels_path} "
                         f"vs {len(truth)} labels in {truth_path}")
    present = [c for c in prediction_columns if c in predictions.columns]
    if not present:
        raise ValueError(f"None of the prediction columns {list(prediction_columns)} found in {labels_path}")

    scores = None
    if score_column in predictions.columns:
        scores = pd.to_numeric(predictions[score_column], errors="raise").to_numpy(dtype=np.float64)

    metrics = {"schema_version": SCHEMA_VERSION, "n_points": len(truth), "outlier_count": truth.outlier_count}
    for column in present:
        labels = load_labels(labels_path, column).labels
        report = threshold_metrics(labels, truth)
        if scores is not None:
            report = with_precision_at_n(report, scores, truth)
        metrics[column] = report.to_dict()
        print_colored(f"{column}: precision={report.precision:.3f} recall={report.recall:.3f} "
                      f"F={report.f_measure:.3f} G-Mean={report.g_mean:.3f}", Colors.RESULT)
    if output_path:
        write_json(output_path, metrics)
    return metrics
