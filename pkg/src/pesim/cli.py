"""Command-line entry point.

Subcommands:
  run              one ensemble for a config
  matrix           the full {full,base} x {unbiased,biased} x 4-scenario grid
  calibrate-check  spin-up-only diagnostic of the market calibration

Exit codes: 0 success, 1 failure, 2 degenerate spin-up history,
3 calibrate-check out of range.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import time
from pathlib import Path

import numpy as np

from .config import parse_config
from .engine import SimulationConfig, run_ensemble, spin_up
from .errors import ConfigError, DegenerateHistory
from .intervention import SCENARIO_MATRICES, ScenarioConfig
from .output import RunManifest, write_outputs
from .prediction import Variant

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_DEGENERATE = 2
EXIT_CALIBRATION = 3

BALANCE_RANGE = (0.4, 0.6)


def _load(path: str) -> tuple[SimulationConfig, str]:
    text = Path(path).read_text()
    return parse_config(path), text


def _run_ensemble_to_dir(config: SimulationConfig, out_dir, input_text: str):
    start = time.perf_counter()
    ensemble = run_ensemble(config)
    manifest = RunManifest(
        fingerprint=config.fingerprint(),
        base_seed=config.base_seed,
        seeds=ensemble.seeds,
        duration_seconds=round(time.perf_counter() - start, 3),
        diagnostics={
            "forced_exits": [r.n_forced_exits for r in ensemble.runs],
            "fit_warnings": [r.fit_warnings for r in ensemble.runs],
        })
    write_outputs(out_dir, ensemble, manifest, input_text)


def cmd_run(args) -> int:
    config, text = _load(args.config)
    if args.seed is not None:
        config = dataclasses.replace(config, base_seed=args.seed)
    if args.runs is not None:
        config = dataclasses.replace(config, n_runs=args.runs)
    _run_ensemble_to_dir(config, args.out, text)
    print(f"wrote {config.n_runs} run(s) to {args.out}")
    return EXIT_OK


def cmd_matrix(args) -> int:
    config, text = _load(args.config)
    for variant in (Variant.FULL, Variant.BASE):
        for bias_name, beta_b in (("unbiased", 0.0), ("biased", 2.0)):
            for scenario_name in SCENARIO_MATRICES:
                cell = dataclasses.replace(
                    config,
                    model_variant=variant,
                    market=dataclasses.replace(config.market, beta_b=beta_b),
                    scenario=ScenarioConfig.from_name(
                        scenario_name, config.scenario.k_scale))
                name = f"{variant.value}_{bias_name}_{scenario_name}"
                _run_ensemble_to_dir(cell, Path(args.out) / name, text)
                print(f"done {name}")
    return EXIT_OK


def cmd_calibrate_check(args) -> int:
    config, _ = _load(args.config)
    rng = np.random.default_rng(config.base_seed)
    state = spin_up(config, rng)
    t_u = state.history.t_u
    threshold = config.intervention.t_u_threshold
    balance = float((t_u > threshold).mean())
    median = float(np.median(t_u))
    ratio = config.intervention.t_u_max / median if median else float("inf")
    print(f"spin-up records:        {len(t_u)}")
    print(f"long-spell fraction:    {balance:.3f}  (target "
          f"[{BALANCE_RANGE[0]}, {BALANCE_RANGE[1]}], threshold {threshold})")
    print(f"median T_u:             {median:.1f}")
    print(f"t_u_max / median T_u:   {ratio:.2f}  (target around 4)")
    print(f"forced exits:           {state.n_forced_exits}")
    if not BALANCE_RANGE[0] <= balance <= BALANCE_RANGE[1]:
        print("calibration check FAILED: label balance out of range")
        return EXIT_CALIBRATION
    print("calibration check passed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pesim",
        description="Labor market simulator with a prediction-model-driven "
                    "employment service",
        epilog="Config keys and defaults are documented in the README and "
               "docs/output_format.md; an all-defaults run needs only an "
               "empty config file.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one seeded ensemble")
    p_run.add_argument("--config", required=True, help="config file path")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--seed", type=int, default=None,
                       help="override base seed")
    p_run.add_argument("--runs", type=int, default=None,
                       help="override number of ensemble runs")
    p_run.set_defaults(func=cmd_run)

    p_matrix = sub.add_parser(
        "matrix", help="run the 16-cell model/bias/scenario grid")
    p_matrix.add_argument("--config", required=True)
    p_matrix.add_argument("--out", required=True)
    p_matrix.set_defaults(func=cmd_matrix)

    p_cal = sub.add_parser(
        "calibrate-check",
        help="spin-up only: report label balance and spell distribution")
    p_cal.add_argument("--config", required=True)
    p_cal.set_defaults(func=cmd_calibrate_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DegenerateHistory as exc:
        print(f"error: degenerate history: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
