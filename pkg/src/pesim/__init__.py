"""Agent-based labor market simulator with a continuously refit
prediction model steering targeted help for job-seekers."""

from .engine import (EnsembleOutput, RunOutput, SimulationConfig, run,
                     run_ensemble, spin_up, step)
from .errors import (ArityMismatch, ConfigError, DegenerateHistory, ParseError,
                     SimulationError, ValidationError, WrongVariant)
from .intervention import InterventionParams, ScenarioConfig
from .labor_market import MarketParams
from .population import Individual, PopulationParams
from .prediction import (FitOptions, HistoryRecord, LogisticModel,
                         ProspectClass, Variant)

__version__ = "0.1.0"
