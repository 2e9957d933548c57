"""Background population: skill features unevenly distributed across two groups.

Every individual carries two independent skill features x1, x2 and a binary
protected attribute x_pr. x1 is a truncated standard normal; x2 gets a group
offset of alpha_pr * (x_pr - 1/2), all scaled by 1/2, so the x_pr = 1 group
("privileged") has higher mean skill. The total skill is s = (x1 + x2) / 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PopulationParams",
    "Individual",
    "s_real",
    "sample_truncated_standard_normal",
    "truncated_normal_array",
    "sample_individual",
    "sample_arrays",
    "x2_bounds",
    "default_x2_max",
]


@dataclass(frozen=True)
class PopulationParams:
    """Parameters of the background population.

    alpha_pr: how much higher x2 is on average in the privileged group.
    trunc: half-width of the normal truncation, in standard deviations.
    """

    alpha_pr: float = 2.0
    trunc: float = 2.0

    def __post_init__(self):
        if self.alpha_pr < 0:
            raise ValueError("alpha_pr must be >= 0")
        if self.trunc <= 0:
            raise ValueError("trunc must be > 0")


@dataclass
class Individual:
    """One agent. s_real is always derived from (x1, x2), never stored."""

    id: int
    x1: float
    x2: float
    x_pr: int
    t_unemployed: int = 0
    wait_remaining: int = 0

    @property
    def s_real(self) -> float:
        return s_real(self.x1, self.x2)


def s_real(x1, x2):
    """Total skill: the mean of the two skill features."""
    return 0.5 * (x1 + x2)


def sample_truncated_standard_normal(rng: np.random.Generator, trunc: float) -> float:
    """One N(0,1) draw conditioned on |value| <= trunc, by rejection."""
    if trunc <= 0:
        raise ValueError("trunc must be > 0")
    while True:
        d = rng.standard_normal()
        if abs(d) <= trunc:
            return d


def truncated_normal_array(rng: np.random.Generator, trunc: float, n: int) -> np.ndarray:
    """Vectorized rejection sampling of n truncated standard normals."""
    out = np.empty(n)
    filled = 0
    while filled < n:
        draws = rng.standard_normal(n - filled)
        keep = draws[np.abs(draws) <= trunc]
        out[filled:filled + keep.size] = keep
        filled += keep.size
    return out


def sample_individual(rng: np.random.Generator, params: PopulationParams,
                      id: int = 0) -> Individual:
    """Draw one individual from the background population."""
    x_pr = int(rng.integers(0, 2))
    x1 = sample_truncated_standard_normal(rng, params.trunc)
    noise = sample_truncated_standard_normal(rng, params.trunc)
    x2 = 0.5 * (params.alpha_pr * (x_pr - 0.5) + noise)
    return Individual(id=id, x1=x1, x2=x2, x_pr=x_pr)


def sample_arrays(rng: np.random.Generator, params: PopulationParams, n: int):
    """Draw n individuals as parallel arrays (x1, x2, x_pr).

    Column-oriented twin of sample_individual, used on the hot path.
    Draw order per individual matches sample_individual (x_pr, x1, noise)
    but draws are batched, so the stream differs from n scalar calls.
    """
    x_pr = rng.integers(0, 2, size=n).astype(np.int8)
    x1 = truncated_normal_array(rng, params.trunc, n)
    noise = truncated_normal_array(rng, params.trunc, n)
    x2 = 0.5 * (params.alpha_pr * (x_pr - 0.5) + noise)
    return x1, x2, x_pr


def x2_bounds(params: PopulationParams, x_pr: int) -> tuple[float, float]:
    """Analytic bounds of x2 for one group."""
    offset = params.alpha_pr * (x_pr - 0.5)
    return 0.5 * (offset - params.trunc), 0.5 * (offset + params.trunc)


def default_x2_max(params: PopulationParams) -> float:
    """Shared skill ceiling for x2: the privileged group's upper bound."""
    return x2_bounds(params, 1)[1]
