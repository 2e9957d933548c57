"""The employment service's help: scenario growth-rate matrix and skill updates.

The growth rate k depends on the (real class, predicted class) pair through a
2x2 matrix. Matrices are stored in display units (as quoted in results: all-1
for the balanced scenario) and multiplied by k_scale (default 1/500) to get
effective rates. Skill growth is deterministic and bounded by per-feature
ceilings x1_max / x2_max.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .population import Individual
from .prediction import ProspectClass

__all__ = [
    "SCENARIO_MATRICES",
    "ScenarioConfig",
    "InterventionParams",
    "k_lookup",
    "update_skill",
    "update_skill_repeated",
    "apply_help",
]

K_SCALE_DEFAULT = 1.0 / 500.0

# rows: real class (low, high); columns: predicted class (low, high)
SCENARIO_MATRICES = {
    "balanced": ((1.0, 1.0), (1.0, 1.0)),
    "onlylow": ((1.0, 0.0), (1.0, 0.0)),
    "onlyhigh": ((0.0, 1.0), (0.0, 1.0)),
    "balanced_errors_penalized": ((1.0, 1.0), (0.5, 1.0)),
}


@dataclass(frozen=True)
class ScenarioConfig:
    """Growth-rate matrix in display units plus the scale factor."""

    name: str
    k_display: tuple[tuple[float, float], tuple[float, float]]
    k_scale: float = K_SCALE_DEFAULT

    def __post_init__(self):
        m = np.asarray(self.k_display, dtype=float)
        if m.shape != (2, 2) or np.any(m < 0):
            raise ValueError("k_display must be a nonnegative 2x2 matrix")

    @classmethod
    def from_name(cls, name: str, k_scale: float = K_SCALE_DEFAULT) -> "ScenarioConfig":
        key = name.strip().lower()
        if key not in SCENARIO_MATRICES:
            raise ValueError(
                f"unknown scenario {name!r}; known: {sorted(SCENARIO_MATRICES)}")
        return cls(name=key, k_display=SCENARIO_MATRICES[key], k_scale=k_scale)

    @classmethod
    def custom(cls, k_display, k_scale: float = K_SCALE_DEFAULT) -> "ScenarioConfig":
        m = tuple(tuple(float(v) for v in row) for row in k_display)
        return cls(name="custom", k_display=m, k_scale=k_scale)

    @property
    def k_effective(self) -> np.ndarray:
        """2x2 matrix of effective growth rates."""
        return np.asarray(self.k_display, dtype=float) * self.k_scale


@dataclass(frozen=True)
class InterventionParams:
    """Skill ceilings, waiting duration, forced-exit horizon, class threshold."""

    x1_max: float = 2.0
    x2_max: float = 1.5
    delta_t_u: int = 5
    t_u_max: int = 12
    t_u_threshold: int = 3

    def __post_init__(self):
        if self.delta_t_u < 0:
            raise ValueError("delta_t_u must be >= 0")
        if self.t_u_threshold < 1:
            raise ValueError("t_u_threshold must be >= 1")
        if self.t_u_max <= self.t_u_threshold:
            raise ValueError("t_u_max must exceed t_u_threshold")


def _class_index(c: ProspectClass) -> int:
    return 0 if c is ProspectClass.LOW else 1


def k_lookup(scenario: ScenarioConfig, real: ProspectClass,
             predicted: ProspectClass) -> float:
    """Effective growth rate for a (real, predicted) class pair."""
    return float(scenario.k_effective[_class_index(real), _class_index(predicted)])


def update_skill(x, k, x_max):
    """One bounded growth step: max(x + k*(x_max - x), x). Elementwise."""
    return np.maximum(x + k * (x_max - x), x)


def update_skill_repeated(x, k, x_max, repetitions: int):
    """Apply update_skill `repetitions` times with the same rate."""
    for _ in range(repetitions):
        x = update_skill(x, k, x_max)
    return x


def apply_help(individual: Individual, k: float, params: InterventionParams,
               repetitions: int) -> Individual:
    """Helped copy of an individual: both skills grown `repetitions` times.

    The caller chooses repetitions = 1 (predicted high) or delta_t_u + 1
    (predicted low, which also enters the waiting group).
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    x1 = float(update_skill_repeated(individual.x1, k, params.x1_max, repetitions))
    x2 = float(update_skill_repeated(individual.x2, k, params.x2_max, repetitions))
    wait = params.delta_t_u if repetitions > 1 else individual.wait_remaining
    return Individual(id=individual.id, x1=x1, x2=x2, x_pr=individual.x_pr,
                      t_unemployed=individual.t_unemployed, wait_remaining=wait)
