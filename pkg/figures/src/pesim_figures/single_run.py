"""Multi-panel time-evolution figure for one run CSV."""

from __future__ import annotations

from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .io import dump_plotted_data, read_intervention_start, read_metrics_csv

PANELS = [
    ("mean skill per group", ["mean_s_priv", "mean_s_upriv"]),
    ("between-group skill difference", ["bgsd"]),
    ("mean unemployment time of hires", ["mean_t_u_hires"]),
    ("between-group difference, hires' unemployment time", ["bgtud_current"]),
    ("underprivileged fraction of the pool", ["frac_upriv"]),
    ("fraction in waiting per group", ["frac_waiting_priv",
                                       "frac_waiting_upriv"]),
    ("counterfactual fraction", ["cf_fraction"]),
]

LINE_LABELS = {
    "mean_s_priv": "privileged",
    "mean_s_upriv": "underprivileged",
    "frac_waiting_priv": "privileged",
    "frac_waiting_upriv": "underprivileged",
}

COLORS = {"default": "#0072B2", "second": "#E69F00"}


def plot_single_run(run_csv, out_path, intervention_start=None) -> Path:
    """Render the fixed panel stack; returns the image path.

    The counterfactual panel is annotated as flat zero when every defined
    value is 0 (attribute-blind model); panels with no defined values are
    labeled "no intervention".
    """
    data = read_metrics_csv(run_csv)
    t = data["t"]
    if intervention_start is None:
        intervention_start = read_intervention_start(run_csv)

    fig, axes = plt.subplots(len(PANELS), 1, figsize=(8, 2.0 * len(PANELS)),
                             sharex=True)
    payload = {"t": t, "intervention_start": intervention_start, "panels": {}}
    for ax, (title, columns) in zip(axes, PANELS):
        plotted = {}
        for i, col in enumerate(columns):
            y = data[col]
            plotted[col] = y
            color = COLORS["default"] if i == 0 else COLORS["second"]
            label = LINE_LABELS.get(col)
            if np.isnan(y).all():
                continue
            ax.plot(t, y, color=color, lw=1.0, label=label)
        defined = ~np.all([np.isnan(plotted[c]) for c in columns], axis=0)
        if not defined.any():
            ax.text(0.5, 0.5, "no intervention", transform=ax.transAxes,
                    ha="center", va="center", color="gray")
        elif title == "counterfactual fraction":
            vals = plotted["cf_fraction"]
            finite = vals[~np.isnan(vals)]
            if finite.size and np.all(finite == 0.0):
                ax.text(0.02, 0.8, "flat zero (attribute-blind model)",
                        transform=ax.transAxes, color="gray", fontsize=8)
        ax.set_ylabel(title, fontsize=8)
        if intervention_start is not None and defined.any():
            ax.axvline(intervention_start, color="black", ls=":", lw=0.8)
        if any(LINE_LABELS.get(c) for c in columns):
            ax.legend(fontsize=7, loc="upper right")
        payload["panels"][title] = plotted
    axes[-1].set_xlabel("timestep")
    fig.tight_layout()

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    dump_plotted_data(out_path, payload)
    return out_path
