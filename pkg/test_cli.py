#!/usr/bin/env python3
"""
End-to-end tests for the pipeline, generate and evaluate commands
"""

import json
import os
import sys
import tempfile
import time

import numpy as np
import pandas as pd

# Add current directory to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from cli import EXIT_OK, EXIT_USAGE, main as cli_main
from dataset import Dataset, GroundTruth
from pipeline import PipelineConfig, run_pipeline
from synthgen import SyntheticOutlierSpec, gen_global, generate, make_banana

def _clusters_with_isolated_outliers(path: str) -> str:
    """Two identical Gaussian clusters 40 apart, six outliers on a radius-10 ring around each."""
    rng = np.random.default_rng(101)
    cluster = rng.normal(scale=0.5, size=(250, 2))
    shift = np.array([40.0, 0.0])
    angles = np.deg2rad(np.arange(0, 360, 60))
    ring_a = 10.0 * np.column_stack([np.cos(angles), np.sin(angles)])
    ring_b = 10.0 * np.column_stack([np.cos(angles + np.pi / 6), np.sin(angles + np.pi / 6)]) + shift
    points = np.vstack([cluster, cluster + shift, ring_a, ring_b])
    frame = pd.DataFrame(points, columns=["x0", "x1"])
    frame["label"] = np.r_[np.zeros(500, dtype=int), np.ones(12, dtype=int)]
    frame.to_csv(path, index=False)
    return path

def _small_blobs(path: str, seed: int = 3) -> str:
    rng = np.random.default_rng(seed)
    points = np.vstack([rng.normal(size=(60, 2)), rng.normal(loc=6.0, size=(60, 2)), [[20.0, -20.0]]])
    frame = pd.DataFrame(points, columns=["a", "b"])
    frame["label"] = np.r_[np.zeros(120, dtype=int), [1]]
    frame.to_csv(path, index=False)
    return path

def _read(path: str) -> bytes:
    with open(path, "rb") as f:
        return f.read()

def test_pipeline_finds_isolated_outliers():
    print("🔍 Testing the full pipeline on two clusters with isolated outliers...")
    with tempfile.TemporaryDirectory() as tmp:
        data = _clusters_with_isolated_outliers(os.path.join(tmp, "data.csv"))
        out = os.path.join(tmp, "out")
        assert cli_main(["pipeline", data, "--out-dir", out, "--label-column", "label", "--quiet"]) == EXIT_OK
        with open(os.path.join(out, "report.json"), encoding="utf-8") as f:
            report = json.load(f)
        labels = pd.read_csv(os.path.join(out, "labels.csv"))

    assert report["schema_version"] == "1.0"
    assert report["config"]["m_max_effective"] == 100
    assert 3 <= report["m_star"] <= 100
    assert report["metrics"]["knee"]["recall"] == 1.0
    assert report["metrics"]["knee"]["precision_at_n"] == 1.0
    assert report["metrics"]["knee"]["n_used"] == 12
    assert "timings" not in report
    assert list(labels.columns) == ["point_id", "score", "label_knee", "label_adjusted"]
    assert labels.shape[0] == 512
    assert labels["label_knee"].iloc[500:].sum() == 12
    print("✅ Every outlier labelled at the knee, P@n = 1")

def test_pipeline_is_deterministic_and_naive_agrees():
    print("🔍 Testing repeat runs and the complete-graph path...")
    with tempfile.TemporaryDirectory() as tmp:
        data = _small_blobs(os.path.join(tmp, "blobs.csv"))
        common = ["--label-column", "label", "--mmax", "20", "--quiet"]
        runs = {}
        for name, extra in (("a", []), ("b", []), ("naive", ["--naive"]), ("threads", ["--threads", "3"])):
            out = os.path.join(tmp, name)
            assert cli_main(["pipeline", data, "--out-dir", out] + common + extra) == EXIT_OK
            runs[name] = (_read(os.path.join(out, "report.json")), _read(os.path.join(out, "labels.csv")))

    assert runs["a"] == runs["b"]
    assert runs["a"][1] == runs["naive"][1]
    assert runs["a"] == runs["threads"]
    print("✅ Byte-identical outputs")

def test_pipeline_options_and_artifacts():
    print("🔍 Testing emitted profiles, timings and clamping...")
    with tempfile.TemporaryDirectory() as tmp:
        data = _small_blobs(os.path.join(tmp, "blobs.csv"))
        out = os.path.join(tmp, "out")
        code = cli_main(["pipeline", data, "--out-dir", out, "--drop-column", "label", "--mmax", "500",
                         "--emit-profiles", "--timings", "--scale", "--metric", "manhattan",
                         "--lambda-mode", "departure_level", "--min-cluster-size", "2", "--quiet"])
        assert code == EXIT_OK
        with open(os.path.join(out, "report.json"), encoding="utf-8") as f:
            report = json.load(f)
        profile = pd.read_csv(os.path.join(out, "profile.csv"))
        ord_rows = pd.read_csv(os.path.join(out, "ord.csv"))
        curve = pd.read_csv(os.path.join(out, "scores_sorted.csv"))

    assert report["config"]["m_max_effective"] == 121
    assert report["config"]["min_cluster_size"] == 2
    assert any("clamped" in w for w in report["warnings"])
    assert "metrics" not in report
    assert set(report["timings"]) >= {"neighbors", "core_sg", "profiles", "selection", "polar"}
    assert profile.shape == (121, 121)
    assert ord_rows.shape[0] == 119
    assert np.all(np.diff(curve["score"].to_numpy()) >= 0)
    print("✅ profile.csv, ord.csv and scores_sorted.csv written")

def test_pipeline_error_codes():
    print("🔍 Testing exit codes...")
    with tempfile.TemporaryDirectory() as tmp:
        assert cli_main(["pipeline", os.path.join(tmp, "missing.csv"), "--out-dir", tmp, "--quiet"]) == EXIT_USAGE
        bad = os.path.join(tmp, "bad.csv")
        with open(bad, "w", encoding="utf-8") as f:
            f.write("x,y\n1,2\n3,oops\n")
        assert cli_main(["pipeline", bad, "--out-dir", tmp, "--quiet"]) == EXIT_USAGE
        blobs = _small_blobs(os.path.join(tmp, "blobs.csv"))
        assert cli_main(["pipeline", blobs, "--out-dir", tmp, "--min-cluster-size", "1", "--quiet"]) == EXIT_USAGE
    assert cli_main(["pipeline"]) == EXIT_USAGE
    assert cli_main(["pipeline", "x.csv", "--metric", "cosine"]) == EXIT_USAGE
    print("✅ Missing and malformed input exit with 2")

def test_generate_command():
    print("🔍 Testing synthetic outlier generation...")
    with tempfile.TemporaryDirectory() as tmp:
        first, second = os.path.join(tmp, "g1.csv"), os.path.join(tmp, "g2.csv")
        for path in (first, second):
            code = cli_main(["generate", "--banana", "300", "--kind", "global", "--count", "20", "--seed", "7",
                             "--output", path, "--quiet"])
            assert code == EXIT_OK
        assert _read(first) == _read(second)
        generated = pd.read_csv(first)
        assert list(generated.columns) == ["x0", "x1", "label", "kind"]
        assert generated["label"].sum() == 20 and generated.shape[0] == 320

        mixed = os.path.join(tmp, "mixed.csv")
        assert cli_main(["generate", "--inliers", first, "--drop-column", "label", "--drop-column", "kind",
                         "--kind", "mixed", "--count", "10", "--outliers-only", "--output", mixed,
                         "--quiet"]) == EXIT_OK
        kinds = pd.read_csv(mixed)["kind"].value_counts().to_dict()
        assert kinds == {"local": 4, "clump": 3, "global": 3}

        assert cli_main(["generate", "--banana", "100", "--alpha", "0", "--output", mixed, "--quiet"]) == EXIT_USAGE
        assert cli_main(["generate", "--kind", "global", "--output", mixed, "--quiet"]) == EXIT_USAGE
    print("✅ Deterministic files, 4/3/3 split, alpha validated")

def test_generate_then_detect_then_evaluate():
    print("🔍 Testing generate -> pipeline -> evaluate...")
    with tempfile.TemporaryDirectory() as tmp:
        data = os.path.join(tmp, "banana.csv")
        assert cli_main(["generate", "--banana", "400", "--kind", "global", "--count", "20", "--seed", "3",
                         "--output", data, "--quiet"]) == EXIT_OK
        out = os.path.join(tmp, "out")
        assert cli_main(["pipeline", data, "--out-dir", out, "--label-column", "label", "--drop-column", "kind",
                         "--mmax", "30", "--quiet"]) == EXIT_OK
        metrics_path = os.path.join(out, "metrics.json")
        assert cli_main(["evaluate", os.path.join(out, "labels.csv"), data, "--output", metrics_path,
                         "--quiet"]) == EXIT_OK
        with open(metrics_path, encoding="utf-8") as f:
            metrics = json.load(f)
        with open(os.path.join(out, "report.json"), encoding="utf-8") as f:
            report = json.load(f)

        short = os.path.join(tmp, "short.csv")
        pd.read_csv(data).head(50).to_csv(short, index=False)
        assert cli_main(["evaluate", os.path.join(out, "labels.csv"), short, "--quiet"]) == EXIT_USAGE

    assert metrics["n_points"] == 420 and metrics["outlier_count"] == 20
    for column in ("label_knee", "label_adjusted"):
        key = column.replace("label_", "")
        assert metrics[column]["recall"] == report["metrics"][key]["recall"]
        assert metrics[column]["tp"] + metrics[column]["fn"] == 20
        assert 0.0 <= metrics[column]["g_mean"] <= np.sqrt(metrics[column]["recall"]) + 1e-12
    print("✅ Saved labels re-evaluate to the pipeline's own metrics")

def _inject(inliers: Dataset, outliers: np.ndarray):
    data = Dataset(np.vstack([inliers.points, outliers]), feature_names=inliers.feature_names)
    truth = GroundTruth(np.r_[np.zeros(inliers.n, dtype=bool), np.ones(outliers.shape[0], dtype=bool)])
    return data, truth

def _banana_run(kind: str, seed: int = 0):
    inliers = make_banana(900, seed=seed)
    outliers, _ = generate(inliers, SyntheticOutlierSpec(kind, SyntheticOutlierSpec.default_count(inliers.n),
                                                         seed=seed))
    data, truth = _inject(inliers, outliers)
    start = time.perf_counter()
    run = run_pipeline(data, truth, PipelineConfig(m_max=100))
    return run["report"], time.perf_counter() - start

def test_banana_global_and_clump_outliers_ranked_first():
    print("🔍 Testing the banana dataset with 5% global outliers and with 5% clumps...")
    for kind in ("global", "clump"):
        report, seconds = _banana_run(kind)
        assert report["metrics"]["precision_at_n_mstar"] >= 0.95, (kind, report["m_star"])
        assert seconds < 30.0
        if kind == "global":
            assert report["metrics"]["knee"]["recall"] == 1.0
    print("✅ P@n at m* >= 0.95, every global outlier above the knee")

def test_banana_local_outliers():
    print("🔍 Testing the banana dataset with 5% local outliers...")
    report, _ = _banana_run("local")
    assert report["metrics"]["precision_at_n_mstar"] >= 0.80, report["m_star"]
    print("✅ P@n at m* >= 0.80")

def test_two_gaussians_with_global_outliers():
    print("🔍 Testing two Gaussian clusters with 20 global outliers at default settings...")
    rng = np.random.default_rng(0)
    inliers = Dataset(np.vstack([rng.normal(loc=(-5.0, 0.0), scale=0.5, size=(250, 2)),
                                 rng.normal(loc=(5.0, 0.0), scale=0.5, size=(250, 2))]))
    outliers = gen_global(inliers, 20, seed=0)
    assert outliers.shape[0] == 20
    report = run_pipeline(*_inject(inliers, outliers))["report"]
    assert report["metrics"]["knee"]["recall"] == 1.0
    assert report["metrics"]["precision_at_n_mstar"] == 1.0
    print("✅ Knee recall 1, P@n at m* = 1")

def main():
    """Run all tests"""
    print("🧪 Command-line tests")
    print("=" * 50)
    tests = [test_pipeline_finds_isolated_outliers, test_pipeline_is_deterministic_and_naive_agrees,
             test_pipeline_options_and_artifacts, test_pipeline_error_codes, test_generate_command,
             test_generate_then_detect_then_evaluate, test_banana_global_and_clump_outliers_ranked_first,
             test_banana_local_outliers, test_two_gaussians_with_global_outliers]
    passed = 0
    for test in tests:
        try:
            test()
            passed += 1
        except Exception as e:
            print(f"❌ {test.__name__} failed: {e}")
        print()
    print("=" * 50)
    print(f"📊 Test Results: {passed}/{len(tests)} tests passed")
    return passed == len(tests)

if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
