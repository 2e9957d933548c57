"""Fairness metrics and per-timestep pool statistics.

Undefined values (empty denominators, metric not yet available) are
represented as None and serialized as empty CSV cells, never as NaN or 0.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Iterable, Optional

import numpy as np

from .prediction import (LogisticModel, ProspectClass, Variant, classify_many,
                         prob_low_many)

__all__ = [
    "MetricsRow",
    "CSV_COLUMNS",
    "bgsd",
    "counterfactual_fraction",
    "equal_opportunity",
    "equal_opportunity_arrays",
    "pool_composition",
    "hire_statistics",
]


@dataclass
class MetricsRow:
    """One timestep's metrics for one run. None = undefined (empty CSV cell)."""

    t: int
    bgsd: Optional[float]
    bgsd_abs: Optional[float]
    cf_fraction: Optional[float]
    eo: Optional[float]
    mean_s_priv: Optional[float]
    mean_s_upriv: Optional[float]
    mean_t_u_hires: Optional[float]
    bgtud_current: Optional[float]
    frac_upriv: float
    frac_waiting_priv: Optional[float]
    frac_waiting_upriv: Optional[float]
    n_active: int
    n_waiting: int

    def values(self) -> list:
        return [getattr(self, f.name) for f in fields(self)]


CSV_COLUMNS = [f.name for f in fields(MetricsRow)]


def bgsd(s, x_pr) -> Optional[float]:
    """Between-group skills difference: mean s of group 0 minus group 1."""
    s = np.asarray(s, dtype=float)
    x_pr = np.asarray(x_pr)
    upriv = s[x_pr == 0]
    priv = s[x_pr == 1]
    if upriv.size == 0 or priv.size == 0:
        return None
    return float(upriv.mean() - priv.mean())


def counterfactual_fraction(model: LogisticModel, x1, x_pr, s,
                            real_model: LogisticModel) -> Optional[float]:
    """Among those predicted low: fraction truly high that would flip to
    predicted high under the opposite protected attribute.

    Zero by construction for the base model. None when nobody is predicted low.
    """
    x1 = np.asarray(x1, dtype=float)
    x_pr = np.asarray(x_pr)
    s = np.asarray(s, dtype=float)

    if model.variant is Variant.BASE:
        pred_low = classify_many(prob_low_many(model, x1[:, None]))
        if not pred_low.any():
            return None
        return 0.0

    feats = np.column_stack([x1, x_pr.astype(float)])
    pred_low = classify_many(prob_low_many(model, feats))
    if not pred_low.any():
        return None
    feats_cf = np.column_stack([x1, 1.0 - x_pr.astype(float)])
    cf_high = ~classify_many(prob_low_many(model, feats_cf))
    true_high = ~classify_many(prob_low_many(real_model, s[:, None]))
    hits = pred_low & cf_high & true_high
    return float(hits.sum() / pred_low.sum())


def equal_opportunity_arrays(pred_low, true_low, x_pr) -> Optional[float]:
    """TNR(privileged) - TNR(underprivileged); negative class = low prospect."""
    pred_low = np.asarray(pred_low, dtype=bool)
    true_low = np.asarray(true_low, dtype=bool)
    x_pr = np.asarray(x_pr)
    tnr = {}
    for g in (0, 1):
        mask = (x_pr == g) & true_low
        if not mask.any():
            return None
        tnr[g] = float((pred_low & mask).sum() / mask.sum())
    return tnr[1] - tnr[0]


def equal_opportunity(
        predictions: Iterable[tuple[ProspectClass, ProspectClass, int]],
) -> Optional[float]:
    """equal_opportunity_arrays over (predicted, true, x_pr) triples."""
    rows = list(predictions)
    pred_low = [p is ProspectClass.LOW for p, _, _ in rows]
    true_low = [t is ProspectClass.LOW for _, t, _ in rows]
    x_pr = [g for _, _, g in rows]
    return equal_opportunity_arrays(pred_low, true_low, x_pr)


def pool_composition(x_pr_active, x_pr_waiting):
    """frac_upriv over the combined pool plus per-group waiting fractions."""
    x_pr_active = np.asarray(x_pr_active)
    x_pr_waiting = np.asarray(x_pr_waiting)
    total = x_pr_active.size + x_pr_waiting.size
    n_upriv = int((x_pr_active == 0).sum() + (x_pr_waiting == 0).sum())
    frac_upriv = n_upriv / total if total else 0.0

    frac_waiting = {}
    for g in (0, 1):
        n_g = int((x_pr_active == g).sum() + (x_pr_waiting == g).sum())
        frac_waiting[g] = (float((x_pr_waiting == g).sum() / n_g)
                           if n_g else None)
    return frac_upriv, frac_waiting[1], frac_waiting[0]


def hire_statistics(t_u, x_pr):
    """Mean spell length of this step's hires and its between-group difference
    (group 0 minus group 1). Either value is None when undefined."""
    t_u = np.asarray(t_u, dtype=float)
    x_pr = np.asarray(x_pr)
    if t_u.size == 0:
        return None, None
    mean_t_u = float(t_u.mean())
    upriv = t_u[x_pr == 0]
    priv = t_u[x_pr == 1]
    if upriv.size == 0 or priv.size == 0:
        return mean_t_u, None
    return mean_t_u, float(upriv.mean() - priv.mean())
