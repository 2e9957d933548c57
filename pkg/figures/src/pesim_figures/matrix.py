"""Grid-level figures over a `matrix` output directory."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .io import (BIASES, SCENARIOS, VARIANTS, dump_plotted_data,
                 matrix_cells, read_metrics_csv, tail_mean, window_mean)
from .style import SCENARIO_COLORS, SCENARIO_LABELS, VARIANT_HATCH

TAIL = 200  # averaging window (last N recorded timesteps)


def _load_cells(matrix_dir):
    cells = matrix_cells(matrix_dir)
    missing = [f"{v}_{b}_{s}" for v in VARIANTS for b in BIASES
               for s in SCENARIOS if (v, b, s) not in cells]
    if missing:
        print(f"warning: missing matrix cells (rendered with gaps): "
              f"{', '.join(missing)}")
    return {key: read_metrics_csv(path) for key, path in cells.items()}


def _bar_positions(n_groups, n_bars):
    width = 0.8 / n_bars
    offsets = (np.arange(n_bars) - (n_bars - 1) / 2) * width
    return width, offsets


def plot_bgsd_time_evolution(data, out_path) -> Path:
    """Rows: model variants, columns: market bias; one color per scenario."""
    fig, axes = plt.subplots(len(VARIANTS), len(BIASES),
                             figsize=(10, 6), sharex=True, sharey=True)
    payload = {}
    for i, variant in enumerate(VARIANTS):
        for j, bias in enumerate(BIASES):
            ax = axes[i][j]
            for scenario in SCENARIOS:
                cell = data.get((variant, bias, scenario))
                if cell is None:
                    continue
                ax.plot(cell["t"], cell["bgsd_abs"],
                        color=SCENARIO_COLORS[scenario], lw=1.0,
                        label=SCENARIO_LABELS[scenario])
                payload[f"{variant}_{bias}_{scenario}"] = {
                    "t": cell["t"], "bgsd_abs": cell["bgsd_abs"]}
            ax.set_title(f"{variant} model, {bias} market", fontsize=9)
    axes[0][0].legend(fontsize=7)
    for ax in axes[-1]:
        ax.set_xlabel("timestep")
    for row in axes:
        row[0].set_ylabel("|between-group skill difference|")
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    dump_plotted_data(out_path, payload)
    return out_path


def _pre_window(cell):
    """The 100 recorded steps right before intervention onset.

    The onset is not in the CSV; the convention here matches the simulator:
    metrics start at spinup_discard+1 and the intervention begins at
    spinup_steps. With the shipped defaults that is (300, 400]; generically
    the window right before the first timestep with a defined cf/eo value.
    """
    t = cell["t"]
    defined = ~np.isnan(cell["cf_fraction"]) | ~np.isnan(cell["eo"])
    onset = t[defined].min() - 1 if defined.any() else t.max()
    return onset - 100, onset


def plot_bgsd_bars(data, out_path) -> Path:
    """End-of-run |BGSD| (last-200 mean) and its change vs pre-intervention."""
    fig, axes = plt.subplots(1, 2, figsize=(11, 4.5))
    width, offsets = _bar_positions(len(VARIANTS) * len(BIASES),
                                    len(SCENARIOS))
    groups = [(v, b) for v in VARIANTS for b in BIASES]
    payload = {"end": {}, "change": {}}
    for k, scenario in enumerate(SCENARIOS):
        ends, changes = [], []
        for variant, bias in groups:
            cell = data.get((variant, bias, scenario))
            if cell is None:
                ends.append(math.nan)
                changes.append(math.nan)
                continue
            end = tail_mean(cell["bgsd_abs"], cell["t"], TAIL)
            lo, hi = _pre_window(cell)
            pre = window_mean(cell["bgsd_abs"], cell["t"], lo, hi)
            ends.append(end)
            changes.append(end - pre)
        x = np.arange(len(groups)) + offsets[k]
        axes[0].bar(x, ends, width, color=SCENARIO_COLORS[scenario],
                    label=SCENARIO_LABELS[scenario])
        axes[1].bar(x, changes, width, color=SCENARIO_COLORS[scenario])
        payload["end"][scenario] = ends
        payload["change"][scenario] = changes
    labels = [f"{v}\n{b}" for v, b in groups]
    for ax, title in zip(axes, ("end of run (last-200 mean)",
                                "change vs pre-intervention")):
        ax.set_xticks(np.arange(len(groups)))
        ax.set_xticklabels(labels, fontsize=8)
        ax.set_title(f"|between-group skill difference|: {title}", fontsize=9)
        ax.axhline(0, color="black", lw=0.8)
    axes[0].legend(fontsize=7)
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    dump_plotted_data(out_path, {"groups": labels, **payload})
    return out_path


def plot_fairness_bars(data, out_path) -> Path:
    """cf-fraction and EO end-of-run bars; hatching marks the base model."""
    fig, axes = plt.subplots(1, 2, figsize=(11, 4.5))
    groups = [(v, b) for v in VARIANTS for b in BIASES]
    width, offsets = _bar_positions(len(groups), len(SCENARIOS))
    payload = {"cf_fraction": {}, "eo": {}}
    for k, scenario in enumerate(SCENARIOS):
        cf_vals, eo_vals = [], []
        for variant, bias in groups:
            cell = data.get((variant, bias, scenario))
            if cell is None:
                cf_vals.append(math.nan)
                eo_vals.append(math.nan)
                continue
            cf = tail_mean(cell["cf_fraction"], cell["t"], TAIL)
            # attribute-blind cells: every defined value is 0 by construction
            if variant == "base" and math.isnan(cf):
                cf = 0.0
            cf_vals.append(cf)
            eo_vals.append(tail_mean(cell["eo"], cell["t"], TAIL))
        x = np.arange(len(groups)) + offsets[k]
        for ax, vals in ((axes[0], cf_vals), (axes[1], eo_vals)):
            for i, (variant, _) in enumerate(groups):
                if math.isnan(vals[i]):
                    continue
                ax.bar(x[i], vals[i], width,
                       color=SCENARIO_COLORS[scenario],
                       hatch=VARIANT_HATCH[variant], edgecolor="black",
                       linewidth=0.4)
        payload["cf_fraction"][scenario] = cf_vals
        payload["eo"][scenario] = eo_vals
    labels = [f"{v}\n{b}" for v, b in groups]
    for ax, title in zip(axes, ("counterfactual fraction (last-200 mean)",
                                "equal opportunity (last-200 mean)")):
        ax.set_xticks(np.arange(len(groups)))
        ax.set_xticklabels(labels, fontsize=8)
        ax.set_title(title, fontsize=9)
        ax.axhline(0, color="black", lw=0.8)
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    dump_plotted_data(out_path, {"groups": labels, **payload})
    return out_path


def plot_matrix_figures(matrix_dir, out_dir) -> list[Path]:
    """Render all grid figure families; returns the image paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    data = _load_cells(matrix_dir)
    return [
        plot_bgsd_time_evolution(data, out_dir / "bgsd_time_evolution.png"),
        plot_bgsd_bars(data, out_dir / "bgsd_bars.png"),
        plot_fairness_bars(data, out_dir / "fairness_bars.png"),
    ]
