"""Hiring probabilities and hire draws, with optional group bias."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

__all__ = ["MarketParams", "bias_term", "job_probability", "draw_hire"]


@dataclass(frozen=True)
class MarketParams:
    """alpha_l: slope of the hiring logistic; beta_l: its location;
    beta_b: bias strength in favor of the privileged group (0 = unbiased)."""

    alpha_l: float = 3.0
    beta_l: float = 2.5
    beta_b: float = 0.0

    def __post_init__(self):
        if self.alpha_l <= 0:
            raise ValueError("alpha_l must be > 0")
        if self.beta_b < 0:
            raise ValueError("beta_b must be >= 0")


def bias_term(beta_b: float, x_pr):
    """b = beta_b * (x_pr - 0.5); positive for the privileged group."""
    return beta_b * (np.asarray(x_pr, dtype=float) - 0.5)


def job_probability(params: MarketParams, s, x_pr):
    """Per-timestep hiring probability, logistic in total skill.

    Works elementwise on arrays. Independent of time already unemployed.
    """
    eta = params.alpha_l * np.asarray(s, dtype=float) - params.beta_l \
        + bias_term(params.beta_b, x_pr)
    p = expit(eta)
    return float(p) if np.isscalar(s) else p


def draw_hire(rng: np.random.Generator, p: float) -> bool:
    """Bernoulli(p) hire draw."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    return bool(rng.random() < p)
