"""File output: per-run CSVs, ensemble mean, coefficient logs, manifest.

Decimal values are written with 9 significant digits; undefined metrics
become empty cells. Rerunning an identical config/seed overwrites with
byte-identical CSVs.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from .config import resolved_text
from .engine import EnsembleOutput
from .metrics import CSV_COLUMNS

__all__ = ["RunManifest", "write_outputs", "format_cell", "COEFF_COLUMNS"]

TOOL_VERSION = "pesim 0.1.0"
COEFF_COLUMNS = ["t", "variant", "coef_1", "coef_2", "intercept"]


@dataclass
class RunManifest:
    fingerprint: str
    base_seed: int
    seeds: list
    tool_version: str = TOOL_VERSION
    duration_seconds: float | None = None
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True) + "\n"


def format_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (int,)) and not isinstance(v, bool):
        return str(v)
    return f"{float(v):.9g}"


def _write_csv(path: Path, header, rows):
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_cell(v) for v in row])
    except OSError as exc:
        raise OSError(f"writing {path}: {exc}") from exc


def write_outputs(out_dir, ensemble: EnsembleOutput, manifest: RunManifest,
                  input_config_text: str | None = None) -> Path:
    """Write the full self-describing output directory."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, run_output in enumerate(ensemble.runs):
        _write_csv(out / f"run_{i}.csv", CSV_COLUMNS,
                   (r.values() for r in run_output.rows))
        _write_csv(out / f"coefficients_{i}.csv", COEFF_COLUMNS,
                   run_output.coeff_rows)
    _write_csv(out / "ensemble_mean.csv", CSV_COLUMNS,
               (r.values() for r in ensemble.mean_rows))
    (out / "manifest.json").write_text(manifest.to_json())
    (out / "config.resolved.cfg").write_text(resolved_text(ensemble.config))
    if input_config_text is not None:
        (out / "config.input.cfg").write_text(input_config_text)
    return out
