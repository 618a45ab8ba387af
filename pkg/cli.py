# cli.py
"""
Command-line front end.

    python . pipeline data.csv --out-dir out/ [--label-column label] [--mmax 100] ...
    python . generate --banana 900 --kind global --count 20 --seed 7 --output data.csv
    python . evaluate out/labels.csv data.csv --output out/metrics.json

Exit codes: 0 success, 1 internal failure, 2 usage or input error.
Failures are also reported on stderr as a one-line JSON object.
"""

import argparse
import json
import sys
from typing import List, Optional

from colors import print_colored, print_error, set_verbose, Colors
from glosh import LAMBDA_MODES
from neighbors import METRICS
from pipeline import (DEFAULT_MMAX, PipelineConfig, StageError, cmd_evaluate, cmd_generate,
                      cmd_pipeline)
from synthgen import DEFAULT_ALPHA, KINDS

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2

def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value

def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiet", action="store_true", help="Only print warnings and errors")
    common.add_argument("--no-header", action="store_true", help="Input CSV files have no header row")
    common.add_argument("--drop-column", action="append", default=[], metavar="COLUMN",
                        help="Ignore a non-feature column (name or zero-based index); repeatable")

    parser = argparse.ArgumentParser(prog="autoglosh", description="Parameter-free GLOSH outlier detection")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pipeline", parents=[common], help="Select min_pts, score and label a CSV dataset")
    p.add_argument("input", help="CSV file with one point per row")
    p.add_argument("--out-dir", default=".", help="Directory for report.json and labels.csv")
    p.add_argument("--label-column", default=None, help="0/1 ground-truth column (1 = outlier)")
    p.add_argument("--mmax", type=int, default=DEFAULT_MMAX, help="Largest min_pts in the profile (clamped to n)")
    p.add_argument("--metric", choices=sorted(METRICS), default="euclidean")
    p.add_argument("--lambda-mode", choices=LAMBDA_MODES, default="core_distance")
    p.add_argument("--min-cluster-size", type=_positive_int, default=None,
                   help="Smallest component a point can depart into (default: follows min_pts; 2 = first attachment)")
    p.add_argument("--scale", action="store_true", help="Min-max scale every feature to [0, 1]")
    p.add_argument("--naive", action="store_true", help="Build every MST on the complete graph")
    p.add_argument("--emit-profiles", action="store_true",
                   help="Also write profile.csv, ord.csv and scores_sorted.csv")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=_positive_int, default=1, help="Worker threads for the profile stage")
    p.add_argument("--timings", action="store_true", help="Record per-stage wall time in the report")

    g = sub.add_parser("generate", parents=[common], help="Inject synthetic outliers around inliers")
    source = g.add_mutually_exclusive_group(required=True)
    source.add_argument("--inliers", help="CSV file of inlier points")
    source.add_argument("--banana", type=_positive_int, metavar="N",
                        help="Use N banana points (two half-moon arcs off the origin) as inliers")
    g.add_argument("--kind", choices=KINDS, default="global")
    g.add_argument("--count", type=_positive_int, default=None, help="Outliers to generate (default 5%% of n)")
    g.add_argument("--alpha", type=_positive_float, default=DEFAULT_ALPHA)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--output", required=True, help="Output CSV path")
    g.add_argument("--outliers-only", action="store_true", help="Write the generated outliers without the inliers")

    e = sub.add_parser("evaluate", parents=[common], help="Score saved labels against ground truth")
    e.add_argument("labels", help="labels.csv written by the pipeline")
    e.add_argument("truth", help="CSV with a 0/1 ground-truth column")
    e.add_argument("--truth-column", default="label")
    e.add_argument("--output", default=None, help="metrics.json path")
    return parser

def _report_failure(stage: str, error: Exception, code: int):
    payload = {"error": {"stage": stage, "type": type(error).__name__, "message": str(error), "exit_code": code}}
    print_error(json.dumps(payload, sort_keys=True))

def run(args: argparse.Namespace) -> int:
    has_header = not args.no_header
    if args.command == "pipeline":
        config = PipelineConfig(m_max=args.mmax, metric=args.metric, lambda_mode=args.lambda_mode,
                                scale=args.scale, naive=args.naive, seed=args.seed, threads=args.threads,
                                timings=args.timings, min_cluster_size=args.min_cluster_size)
        report = cmd_pipeline(args.input, args.out_dir, config, label_column=args.label_column,
                              has_header=has_header, drop_columns=args.drop_column,
                              emit_profiles=args.emit_profiles)
        print_colored(f"m* = {report['m_star']}, {report['outliers_knee']} outliers at the knee, "
                      f"{report['outliers_adjusted']} at the adjusted threshold", Colors.OUTLIER, Colors.BOLD)
        print_colored(f"{report['n_points'] - report['outliers_adjusted']} inliers kept", Colors.INLIER)
    elif args.command == "generate":
        cmd_generate(args.output, args.kind, count=args.count, alpha=args.alpha, seed=args.seed,
                     inliers_path=args.inliers, banana=args.banana, has_header=has_header,
                     drop_columns=args.drop_column, outliers_only=args.outliers_only)
    else:
        cmd_evaluate(args.labels, args.truth, args.output, truth_column=args.truth_column)
    return EXIT_OK

def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    set_verbose(not args.quiet)
    print_colored("=== Auto-GLOSH: parameter-free outlier detection ===\n", Colors.INFO, Colors.BOLD)
    try:
        code = run(args)
        print_colored("Done.", Colors.SUCCESS, Colors.BOLD)
        return code
    except StageError as e:
        code = EXIT_USAGE if isinstance(e.cause, (ValueError, OSError)) else EXIT_INTERNAL
        _report_failure(e.stage, e.cause, code)
        return code
    except (ValueError, OSError) as e:
        _report_failure(args.command, e, EXIT_USAGE)
        return EXIT_USAGE
    except Exception as e:
        _report_failure(args.command, e, EXIT_INTERNAL)
        return EXIT_INTERNAL
    finally:
        set_verbose(True)

if __name__ == "__main__":
    sys.exit(main())
