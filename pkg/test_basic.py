#!/usr/bin/env python3
"""
Basic test script to verify the outlier toolkit end to end
"""

import sys
import os

import numpy as np

# Add current directory to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

def test_imports():
    """Test that all modules can be imported"""
    print("🔍 Testing imports...")

    from colors import print_colored, Colors
    print("✅ colors module imported")

    from dataset import Dataset, load_csv, min_max_scale
    print("✅ dataset module imported")

    from neighbors import pairwise_distances, core_distance_table
    print("✅ neighbors module imported")

    from mstgraph import mst_complete, build_core_sg, mst_from_core_sg
    print("✅ mstgraph module imported")

    from glosh import glosh_scores, glosh_profile_matrix
    print("✅ glosh module imported")

    from autoglosh import ord_profile, find_elbow
    print("✅ autoglosh module imported")

    from polar import polar
    print("✅ polar module imported")

    from synthgen import generate, fit_gmm
    print("✅ synthgen module imported")

    from evaluation import precision_at_n, threshold_metrics
    print("✅ evaluation module imported")

    from pipeline import run_pipeline, cmd_pipeline, cmd_generate, cmd_evaluate
    print("✅ pipeline module imported")

    from cli import main
    print("✅ cli module imported")

def test_run_pipeline_in_memory():
    """Run the whole detection chain on a small dataset without touching disk"""
    print("\n🎯 Testing in-memory pipeline...")
    from colors import set_verbose
    from dataset import Dataset, GroundTruth
    from pipeline import PipelineConfig, run_pipeline

    rng = np.random.default_rng(0)
    points = np.vstack([rng.normal(size=(80, 2)), [[15.0, 15.0], [-15.0, 12.0]]])
    truth = GroundTruth(np.r_[np.zeros(80, dtype=bool), [True, True]])

    set_verbose(False)
    try:
        run = run_pipeline(Dataset(points), truth, PipelineConfig(m_max=15))
    finally:
        set_verbose(True)
    report = run["report"]
    assert 3 <= report["m_star"] <= 15
    print(f"✅ m* = {report['m_star']}")
    assert len(report["points"]) == 82
    assert report["metrics"]["knee"]["recall"] == 1.0
    print("✅ Both far points labelled as outliers")
    assert report["adjusted_threshold"] >= report["knee_score"]
    print("✅ Adjusted threshold is not below the knee")

def main():
    """Run all tests"""
    print("🧪 Auto-GLOSH - Basic Functionality Test")
    print("=" * 50)

    tests = [
        test_imports,
        test_run_pipeline_in_memory,
    ]

    passed = 0
    total = len(tests)

    for test in tests:
        try:
            test()
            passed += 1
        except Exception as e:
            print(f"❌ {test.__name__} failed: {e}")
        print()

    print("=" * 50)
    print(f"📊 Test Results: {passed}/{total} tests passed")

    if passed == total:
        print("🎉 All tests passed! The toolkit is working correctly.")
        return True
    else:
        print("❌ Some tests failed. Please check the errors above.")
        return False

if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
