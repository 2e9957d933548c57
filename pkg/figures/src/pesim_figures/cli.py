"""Standalone entry points: pesim-fig-single and pesim-fig-matrix."""

from __future__ import annotations

import argparse
import sys

from .io import SchemaError
from .matrix import plot_matrix_figures
from .single_run import plot_single_run


def main_single(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pesim-fig-single",
        description="Multi-panel time-evolution figure for one run CSV")
    parser.add_argument("--in", dest="run_csv", required=True,
                        help="run_<i>.csv or ensemble_mean.csv")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--intervention-start", type=int, default=None,
                        help="override the onset marker timestep")
    args = parser.parse_args(argv)
    try:
        path = plot_single_run(args.run_csv, args.out,
                               args.intervention_start)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0


def main_matrix(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pesim-fig-matrix",
        description="Grid figures over a matrix output directory")
    parser.add_argument("--in", dest="matrix_dir", required=True,
                        help="directory produced by `pesim matrix`")
    parser.add_argument("--out", required=True, help="output directory")
    args = parser.parse_args(argv)
    try:
        paths = plot_matrix_figures(args.matrix_dir, args.out)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for p in paths:
        print(f"wrote {p}")
    return 0


if __name__ == "__main__":
    sys.exit(main_single())
