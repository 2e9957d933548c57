"""Logistic prospect classifiers fitted on the accumulated hiring history.

Three variants are used downstream:

* full  -- P(long spell | x1, x_pr), sees the protected attribute
* base  -- P(long spell | x1), does not see it
* real  -- P(long spell | s_real), surrogate for the true prospect class

Label 1 means "low prospect": the completed unemployment spell exceeded the
threshold. Fitting is Newton / iteratively reweighted least squares on the
L2-penalized Bernoulli log-likelihood (intercept unpenalized), with
step-halving whenever a full Newton step would decrease the objective.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.special import expit

from .errors import ArityMismatch, DegenerateHistory, WrongVariant

__all__ = [
    "Variant",
    "ProspectClass",
    "FitOptions",
    "HistoryRecord",
    "LogisticModel",
    "penalized_log_likelihood",
    "log_likelihood_gradient",
    "fit_logistic",
    "fit_real_prospect",
    "prob_low",
    "prob_low_many",
    "classify",
    "classify_many",
    "counterfactual_class",
]


class Variant(enum.Enum):
    FULL = "full"
    BASE = "base"
    REAL_PROSPECT = "real"


class ProspectClass(enum.Enum):
    LOW = "low"
    HIGH = "high"


N_COEFFICIENTS = {Variant.FULL: 2, Variant.BASE: 1, Variant.REAL_PROSPECT: 1}


@dataclass(frozen=True)
class FitOptions:
    ridge: float = 1e-6
    tol: float = 1e-8
    max_iter: int = 100

    def __post_init__(self):
        if self.ridge < 0:
            raise ValueError("ridge must be >= 0")
        if self.tol <= 0:
            raise ValueError("tol must be > 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(frozen=True)
class HistoryRecord:
    """One completed unemployment spell (t_u >= 1 by construction)."""

    x1: float
    x_pr: int
    s_real: float
    t_u: int


@dataclass(frozen=True)
class LogisticModel:
    """Fitted classifier. coefficients has one entry per feature."""

    coefficients: tuple[float, ...]
    intercept: float
    variant: Variant
    converged: bool = True

    def __post_init__(self):
        if len(self.coefficients) != N_COEFFICIENTS[self.variant]:
            raise ArityMismatch(
                f"{self.variant.value} model needs "
                f"{N_COEFFICIENTS[self.variant]} coefficients, "
                f"got {len(self.coefficients)}")
        if not all(np.isfinite(self.coefficients)) or not np.isfinite(self.intercept):
            raise ValueError("model parameters must be finite")


def penalized_log_likelihood(features, labels, coefficients, intercept,
                             ridge: float) -> float:
    """Bernoulli log-likelihood minus (ridge/2)*||coefficients||^2.

    The intercept is not penalized. Overflow-safe via log1p(exp(-|eta|)).
    """
    X = np.atleast_2d(np.asarray(features, dtype=float))
    y = np.asarray(labels, dtype=float)
    w = np.asarray(coefficients, dtype=float)
    eta = X @ w + intercept
    return _pll_from_eta(eta, y, w, ridge)


def _pll_from_eta(eta, y, w, ridge):
    # sum y*eta - log(1 + e^eta), stable via logaddexp
    return float(y @ eta - np.logaddexp(0.0, eta).sum()
                 - 0.5 * ridge * (w @ w))


def log_likelihood_gradient(features, labels, coefficients, intercept,
                            ridge: float) -> np.ndarray:
    """Gradient of the penalized log-likelihood, intercept component last."""
    X = np.atleast_2d(np.asarray(features, dtype=float))
    y = np.asarray(labels, dtype=float)
    w = np.asarray(coefficients, dtype=float)
    resid = y - expit(X @ w + intercept)
    return np.concatenate([X.T @ resid - ridge * w, [resid.sum()]])


def fit_logistic(features, labels, options: FitOptions = FitOptions(),
                 variant: Variant = Variant.BASE,
                 initial: np.ndarray | None = None) -> LogisticModel:
    """IRLS/Newton fit with step-halving. Label 1 = low prospect.

    `initial` optionally warm-starts the iteration (parameter vector with the
    intercept last); it changes only the iteration path, not the optimum.
    Raises DegenerateHistory when all labels are identical. If max_iter is
    exhausted the best iterate is returned with converged=False.
    """
    X = np.atleast_2d(np.asarray(features, dtype=float))
    y = np.asarray(labels, dtype=float)
    n, k = X.shape
    if n < 2:
        raise DegenerateHistory(f"need >= 2 rows, got {n}")
    if y.shape != (n,):
        raise ValueError("labels length does not match feature rows")
    if k != N_COEFFICIENTS[variant]:
        raise ArityMismatch(
            f"{variant.value} model expects {N_COEFFICIENTS[variant]} "
            f"feature columns, got {k}")
    if np.all(y == y[0]):
        raise DegenerateHistory("all labels identical")

    Xa = np.hstack([X, np.ones((n, 1))])  # intercept column last
    pen = np.zeros(k + 1)
    pen[:k] = options.ridge

    theta = np.zeros(k + 1) if initial is None else np.asarray(initial, dtype=float).copy()
    eta = Xa @ theta
    ll = _pll_from_eta(eta, y, theta[:k], options.ridge)

    converged = False
    for _ in range(options.max_iter):
        p = expit(eta)
        weights = p * (1.0 - p)
        grad = Xa.T @ (y - p) - pen * theta
        hess = (Xa * weights[:, None]).T @ Xa + np.diag(pen)
        try:
            delta = np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            delta = np.linalg.lstsq(hess, grad, rcond=None)[0]

        # step-halving: back off until the objective does not decrease
        eta_delta = Xa @ delta
        step = 1.0
        for _ in range(50):
            cand = theta + step * delta
            eta_cand = eta + step * eta_delta
            ll_cand = _pll_from_eta(eta_cand, y, cand[:k], options.ridge)
            if ll_cand >= ll - 1e-15:
                break
            step *= 0.5
        theta, eta, ll = cand, eta_cand, ll_cand
        if np.max(np.abs(step * delta)) < options.tol:
            converged = True
            break

    return LogisticModel(coefficients=tuple(theta[:k]), intercept=float(theta[k]),
                         variant=variant, converged=converged)


def fit_real_prospect(history: Iterable[HistoryRecord], t_u_threshold: int,
                      options: FitOptions = FitOptions()) -> LogisticModel:
    """Fit the true-prospect surrogate: s_real -> 1{t_u > threshold}."""
    records = list(history)
    s = np.array([r.s_real for r in records])
    labels = np.array([r.t_u > t_u_threshold for r in records], dtype=float)
    return fit_logistic(s[:, None], labels, options, variant=Variant.REAL_PROSPECT)


def prob_low(model: LogisticModel, features: Sequence[float]) -> float:
    """P(low prospect) for one feature vector."""
    f = np.asarray(features, dtype=float)
    if f.shape != (len(model.coefficients),):
        raise ArityMismatch(
            f"expected {len(model.coefficients)} features, got {f.shape}")
    return float(expit(f @ np.asarray(model.coefficients) + model.intercept))


def prob_low_many(model: LogisticModel, features: np.ndarray) -> np.ndarray:
    """P(low prospect) for a (n, k) feature matrix."""
    X = np.atleast_2d(np.asarray(features, dtype=float))
    if X.shape[1] != len(model.coefficients):
        raise ArityMismatch(
            f"expected {len(model.coefficients)} feature columns, "
            f"got {X.shape[1]}")
    return expit(X @ np.asarray(model.coefficients) + model.intercept)


def classify(p_low: float) -> ProspectClass:
    """Low iff p_low > 0.5; ties go to High."""
    return ProspectClass.LOW if p_low > 0.5 else ProspectClass.HIGH


def classify_many(p_low: np.ndarray) -> np.ndarray:
    """Boolean array: True where classified Low."""
    return np.asarray(p_low) > 0.5


def counterfactual_class(model: LogisticModel, x1: float, x_pr: int) -> ProspectClass:
    """Classification the full model would give under the flipped attribute."""
    if model.variant is not Variant.FULL:
        raise WrongVariant("counterfactual class requires the full model")
    return classify(prob_low(model, (x1, 1 - x_pr)))
