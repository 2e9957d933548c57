"""Exception types shared across the simulator."""


class SimulationError(Exception):
    """Base class for all pesim errors."""


class DegenerateHistory(SimulationError):
    """Training history has fewer than two records or only one label class."""


class ArityMismatch(SimulationError):
    """Feature vector length does not match the model's coefficient count."""


class WrongVariant(SimulationError):
    """Operation called on a model variant it is not defined for."""


class ConfigError(SimulationError):
    """Base class for configuration problems."""


class ParseError(ConfigError):
    """Config file could not be parsed; message carries the line number."""


class ValidationError(ConfigError):
    """Parsed config violates an invariant; message names it."""
