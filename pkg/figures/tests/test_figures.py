"""Tests for the figure scripts (S1): synthetic CSV fixtures only."""

import csv
import json
import math
from pathlib import Path

import numpy as np
import pytest

from pesim_figures import (EXPECTED_COLUMNS, SchemaError, plot_matrix_figures,
                           plot_single_run, read_metrics_csv, tail_mean)
from pesim_figures.cli import main_matrix, main_single
from pesim_figures.io import SCENARIOS, window_mean

T0, T1, ONSET = 61, 260, 120  # recorded range and intervention onset


def synth_rows(variant: str, bias: str, scenario: str, seed: int):
    """Deterministic synthetic metrics with the real schema conventions."""
    rng = np.random.default_rng(seed)
    rows = []
    for t in range(T0, T1 + 1):
        pes = t > ONSET
        decay = 0.3 if variant == "full" and pes else 0.0
        bg = -0.5 + decay * min(1.0, (t - ONSET) / 50) if pes else -0.5
        bg += rng.normal(0, 0.01)
        if variant == "base":
            cf = 0.0 if pes else None
        else:
            cf = (0.2 if bias == "biased" else 0.1) if pes else None
        eo = (-0.2 if variant == "full" else 0.1) if pes else None
        rows.append({
            "t": t, "bgsd": bg, "bgsd_abs": abs(bg), "cf_fraction": cf,
            "eo": eo, "mean_s_priv": 0.3, "mean_s_upriv": 0.3 + bg,
            "mean_t_u_hires": 3.0 if t % 7 else None,
            "bgtud_current": 0.5 if t % 7 else None,
            "frac_upriv": 0.6, "frac_waiting_priv": 0.1 if pes else 0.0,
            "frac_waiting_upriv": 0.2 if pes else 0.0,
            "n_active": 180, "n_waiting": 20 if pes else 0,
        })
    return rows


def write_cell(path: Path, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(EXPECTED_COLUMNS)
        for r in rows:
            w.writerow(["" if r[c] is None else
                        (str(r[c]) if isinstance(r[c], int) else f"{r[c]:.9g}")
                        for c in EXPECTED_COLUMNS])


@pytest.fixture
def matrix_dir(tmp_path):
    root = tmp_path / "matrix"
    seed = 0
    for variant in ("full", "base"):
        for bias in ("unbiased", "biased"):
            for scenario in SCENARIOS:
                seed += 1
                write_cell(root / f"{variant}_{bias}_{scenario}"
                           / "ensemble_mean.csv",
                           synth_rows(variant, bias, scenario, seed))
    return root


@pytest.fixture
def run_csv(tmp_path):
    p = tmp_path / "run" / "run_0.csv"
    write_cell(p, synth_rows("full", "unbiased", "balanced", 42))
    (p.parent / "config.resolved.cfg").write_text(
        f"[engine]\nspinup_steps = {ONSET}\n")
    return p


def load_dump(image_path: Path) -> dict:
    return json.loads(Path(str(image_path) + ".data.json").read_text())


def test_read_metrics_csv_roundtrip(run_csv):
    data = read_metrics_csv(run_csv)
    assert list(data) == EXPECTED_COLUMNS
    assert data["t"][0] == T0
    assert math.isnan(data["cf_fraction"][0])  # absent pre-onset
    assert data["cf_fraction"][-1] == pytest.approx(0.1)


def test_schema_mismatch_diagnostic(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("t,bgsd,oops\n1,0.1,2\n")
    with pytest.raises(SchemaError, match="oops"):
        read_metrics_csv(bad)


def test_single_run_figure_and_dump(run_csv, tmp_path):
    out = plot_single_run(run_csv, tmp_path / "fig.png")
    assert out.exists()
    dump = load_dump(out)
    assert dump["intervention_start"] == ONSET
    data = read_metrics_csv(run_csv)
    # dumped series match the CSV at printed precision
    got = dump["panels"]["between-group skill difference"]["bgsd"]
    expect = [float(f"{v:.9g}") for v in data["bgsd"]]
    assert got == expect


def test_single_run_rerender_identical_dump(run_csv, tmp_path):
    a = plot_single_run(run_csv, tmp_path / "a.png")
    b = plot_single_run(run_csv, tmp_path / "b.png")
    assert Path(str(a) + ".data.json").read_bytes() == \
        Path(str(b) + ".data.json").read_bytes()


def test_matrix_figures_families(matrix_dir, tmp_path):
    out = tmp_path / "figs"
    paths = plot_matrix_figures(matrix_dir, out)
    names = {p.name for p in paths}
    assert names == {"bgsd_time_evolution.png", "bgsd_bars.png",
                     "fairness_bars.png"}
    for p in paths:
        assert p.exists()
        assert Path(str(p) + ".data.json").exists()


def test_base_cells_cf_exactly_zero(matrix_dir, tmp_path):
    paths = plot_matrix_figures(matrix_dir, tmp_path / "figs")
    dump = load_dump([p for p in paths if p.name == "fairness_bars.png"][0])
    groups = dump["groups"]
    base_idx = [i for i, g in enumerate(groups) if g.startswith("base")]
    for scenario in SCENARIOS:
        for i in base_idx:
            assert dump["cf_fraction"][scenario][i] == 0.0


def test_bar_values_match_recomputation(matrix_dir, tmp_path):
    """Last-200-window averages recomputed independently from the CSVs."""
    paths = plot_matrix_figures(matrix_dir, tmp_path / "figs")
    bars = load_dump([p for p in paths if p.name == "bgsd_bars.png"][0])
    fair = load_dump([p for p in paths if p.name == "fairness_bars.png"][0])
    groups = [("full", "unbiased"), ("full", "biased"),
              ("base", "unbiased"), ("base", "biased")]
    for k, scenario in enumerate(SCENARIOS):
        for i, (variant, bias) in enumerate(groups):
            data = read_metrics_csv(matrix_dir / f"{variant}_{bias}_{scenario}"
                                    / "ensemble_mean.csv")
            t = data["t"]
            end = tail_mean(data["bgsd_abs"], t, 200)
            assert bars["end"][scenario][i] == pytest.approx(
                float(f"{end:.9g}"), abs=0)
            eo = tail_mean(data["eo"], t, 200)
            assert fair["eo"][scenario][i] == pytest.approx(
                float(f"{eo:.9g}"), abs=0)


def test_missing_cell_renders_with_gap(matrix_dir, tmp_path, capsys):
    import shutil
    shutil.rmtree(matrix_dir / "full_biased_onlyhigh")
    paths = plot_matrix_figures(matrix_dir, tmp_path / "figs")
    assert all(p.exists() for p in paths)
    assert "full_biased_onlyhigh" in capsys.readouterr().out
    bars = load_dump([p for p in paths if p.name == "bgsd_bars.png"][0])
    assert bars["end"]["onlyhigh"][1] is None  # NaN dumped as null


def test_single_scenario_directory(tmp_path):
    root = tmp_path / "matrix1"
    for variant in ("full", "base"):
        for bias in ("unbiased", "biased"):
            write_cell(root / f"{variant}_{bias}_balanced"
                       / "ensemble_mean.csv",
                       synth_rows(variant, bias, "balanced", 3))
    paths = plot_matrix_figures(root, tmp_path / "figs")
    assert all(p.exists() for p in paths)


def test_no_intervention_boundary(tmp_path):
    """All PES-dependent columns absent: panels say 'no intervention'."""
    rows = synth_rows("full", "unbiased", "balanced", 9)
    for r in rows:
        r["cf_fraction"] = None
        r["eo"] = None
        r["frac_waiting_priv"] = 0.0
        r["frac_waiting_upriv"] = 0.0
    p = tmp_path / "run_0.csv"
    write_cell(p, rows)
    out = plot_single_run(p, tmp_path / "fig.png")
    dump = load_dump(out)
    assert all(v is None for v in dump["panels"]["counterfactual fraction"]
               ["cf_fraction"])


def test_cli_entry_points(run_csv, matrix_dir, tmp_path, capsys):
    assert main_single(["--in", str(run_csv),
                        "--out", str(tmp_path / "s.png")]) == 0
    assert main_matrix(["--in", str(matrix_dir),
                        "--out", str(tmp_path / "m")]) == 0
    assert main_single(["--in", str(tmp_path / "nope.csv"),
                        "--out", str(tmp_path / "x.png")]) == 1
    assert "error" in capsys.readouterr().err
