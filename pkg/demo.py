#!/usr/bin/env python3
"""
Auto-GLOSH Demo Script
Generates a banana dataset with injected outliers, picks min_pts,
thresholds the scores and compares the result with the injected labels.
"""

import sys
import os
import shutil
import tempfile

# Add current directory to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from colors import print_colored, Colors
from pipeline import PipelineConfig, cmd_evaluate, cmd_generate, cmd_pipeline

DEMO_POINTS = 900
DEMO_OUTLIERS = 45

def demo_generation(work_dir, kind):
    """Create the demo dataset"""
    print_colored("\n" + "="*60, Colors.INFO)
    print_colored(f"🍌 AUTO-GLOSH DEMO - {kind.upper()} OUTLIERS", Colors.INFO, Colors.BOLD)
    print_colored("="*60, Colors.INFO)

    print_colored(f"\n📝 Step 1: {DEMO_POINTS} banana inliers + {DEMO_OUTLIERS} {kind} outliers...", Colors.INFO)
    path = os.path.join(work_dir, f"banana_{kind}.csv")
    summary = cmd_generate(path, kind, count=DEMO_OUTLIERS, seed=1, banana=DEMO_POINTS)
    print_colored(f"Outlier kinds: {summary['kind_counts']}", Colors.INFO)
    return path

def demo_detection(work_dir, data_path):
    """Select min_pts, score and label"""
    print_colored("\n🔎 Step 2: Selecting min_pts and labelling...", Colors.INFO)
    out_dir = os.path.join(work_dir, "out_" + os.path.splitext(os.path.basename(data_path))[0])
    report = cmd_pipeline(data_path, out_dir, PipelineConfig(m_max=100), label_column="label",
                          drop_columns=["kind"], emit_profiles=True)

    print_colored("\n📊 Step 3: Results", Colors.INFO)
    print_colored(f"  m*                  {report['m_star']}", Colors.RESULT)
    print_colored(f"  knee threshold      {report['knee_score']:.4f} -> {report['outliers_knee']} outliers",
                  Colors.OUTLIER)
    print_colored(f"  adjusted threshold  {report['adjusted_threshold']:.4f} -> {report['outliers_adjusted']} outliers",
                  Colors.OUTLIER)
    metrics = report["metrics"]
    print_colored(f"  P@n at m*           {metrics['precision_at_n_mstar']:.3f}", Colors.RESULT)
    print_colored(f"  best P@n            {metrics['precision_profile']['best_precision_at_n']:.3f} "
                  f"(min_pts={metrics['precision_profile']['best_min_pts']})", Colors.RESULT)

    print_colored("\n🧮 Step 4: Re-evaluating the saved labels...", Colors.INFO)
    cmd_evaluate(os.path.join(out_dir, "labels.csv"), data_path, os.path.join(out_dir, "metrics.json"))
    return report

def main():
    """Main demo function"""
    print_colored("🍌 AUTO-GLOSH - COMPLETE DEMO", Colors.INFO, Colors.BOLD)
    print_colored("This demo shows parameter-free outlier detection on synthetic data", Colors.INFO)

    work_dir = tempfile.mkdtemp(prefix="autoglosh_demo_")
    try:
        for kind in ("global", "mixed"):
            demo_detection(work_dir, demo_generation(work_dir, kind))

        print_colored("\n" + "="*60, Colors.SUCCESS)
        print_colored("🎉 DEMO COMPLETED SUCCESSFULLY!", Colors.SUCCESS, Colors.BOLD)
        print_colored("="*60, Colors.SUCCESS)

    except Exception as e:
        print_colored(f"\n❌ Demo failed: {e}", Colors.ERROR)
        import traceback
        traceback.print_exc()

    finally:
        shutil.rmtree(work_dir, ignore_errors=True)
        print_colored("\n✨ Demo finished. All temporary files cleaned up.", Colors.INFO)

if __name__ == "__main__":
    main()
