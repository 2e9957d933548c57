"""CSV and config readers for the figure scripts.

This package deliberately never imports the simulator; the documented CSV
schema is the only interface.
"""

from __future__ import annotations

import configparser
import csv
import json
import math
from pathlib import Path

import numpy as np

EXPECTED_COLUMNS = [
    "t", "bgsd", "bgsd_abs", "cf_fraction", "eo", "mean_s_priv",
    "mean_s_upriv", "mean_t_u_hires", "bgtud_current", "frac_upriv",
    "frac_waiting_priv", "frac_waiting_upriv", "n_active", "n_waiting",
]

SCENARIOS = ["balanced", "onlylow", "onlyhigh", "balanced_errors_penalized"]
VARIANTS = ["full", "base"]
BIASES = ["unbiased", "biased"]


class SchemaError(RuntimeError):
    pass


def read_metrics_csv(path) -> dict[str, np.ndarray]:
    """Columns as float arrays; empty (absent) cells become NaN."""
    path = Path(path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise SchemaError(f"{path}: empty file")
    header = rows[0]
    if header != EXPECTED_COLUMNS:
        missing = [c for c in EXPECTED_COLUMNS if c not in header]
        extra = [c for c in header if c not in EXPECTED_COLUMNS]
        raise SchemaError(
            f"{path}: unexpected column set (missing: {missing}, "
            f"unexpected: {extra}, order must match the documented schema)")
    data = {c: [] for c in header}
    for row in rows[1:]:
        for c, cell in zip(header, row):
            data[c].append(float(cell) if cell != "" else math.nan)
    return {c: np.asarray(v, dtype=float) for c, v in data.items()}


def read_intervention_start(run_csv_path) -> int | None:
    """Intervention-onset timestep from config.resolved.cfg next to the CSV."""
    cfg_path = Path(run_csv_path).parent / "config.resolved.cfg"
    if not cfg_path.exists():
        return None
    parser = configparser.ConfigParser(interpolation=None)
    parser.read(cfg_path)
    try:
        return parser.getint("engine", "spinup_steps")
    except (configparser.Error, ValueError):
        return None


def tail_mean(values: np.ndarray, t: np.ndarray, window: int = 200) -> float:
    """Mean over the last `window` recorded timesteps, NaN cells skipped."""
    cut = t.max() - window
    sel = values[t > cut]
    sel = sel[~np.isnan(sel)]
    return float(sel.mean()) if sel.size else math.nan


def window_mean(values: np.ndarray, t: np.ndarray, lo: float, hi: float) -> float:
    sel = values[(t > lo) & (t <= hi)]
    sel = sel[~np.isnan(sel)]
    return float(sel.mean()) if sel.size else math.nan


def matrix_cells(matrix_dir) -> dict[tuple[str, str, str], Path]:
    """Map (variant, bias, scenario) -> ensemble_mean.csv for present cells."""
    matrix_dir = Path(matrix_dir)
    cells = {}
    for variant in VARIANTS:
        for bias in BIASES:
            for scenario in SCENARIOS:
                p = matrix_dir / f"{variant}_{bias}_{scenario}" / "ensemble_mean.csv"
                if p.exists():
                    cells[(variant, bias, scenario)] = p
    return cells


def dump_plotted_data(out_path, payload: dict) -> Path:
    """Write the plotted arrays next to the image (numeric regression hook).

    Values are serialized at 9 significant digits, matching the CSV
    convention, so identical inputs yield identical dumps.
    """
    out_path = Path(out_path)
    dump = out_path.with_suffix(out_path.suffix + ".data.json")

    def enc(v):
        if isinstance(v, dict):
            return {k: enc(x) for k, x in v.items()}
        if isinstance(v, (list, tuple, np.ndarray)):
            return [enc(x) for x in v]
        if isinstance(v, (float, np.floating)):
            return None if math.isnan(v) else float(f"{v:.9g}")
        if isinstance(v, (int, np.integer)):
            return int(v)
        return v

    dump.write_text(json.dumps(enc(payload), indent=1, sort_keys=True) + "\n")
    return dump
