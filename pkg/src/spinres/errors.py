"""Exception hierarchy shared by all modules."""


class SpinResError(Exception):
    """Base class for every error raised by spinres."""


class ConfigurationError(SpinResError, ValueError):
    """Invalid parameters or configuration (bad chain length, bad range, ...)."""


class CriticalParametersError(SpinResError):
    """The single-particle gap closes where the computation needs it open."""


class PhaseError(SpinResError, ValueError):
    """The operation is undefined in the phase the parameters belong to."""


class AmbiguousPhaseError(PhaseError, CriticalParametersError):
    """Parameters sit on a critical line, so the phase-resolved formula is undefined."""


class NumericalError(SpinResError, ArithmeticError):
    """A numerical procedure failed to reach its tolerance.

    ``estimate`` carries the best value obtained, when there is one.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class ConsistencyError(NumericalError):
    """A computed density matrix violates positivity or normalization."""


class NormalizationError(ConsistencyError):
    """A probability vector does not sum to one."""


class InsufficientDataError(SpinResError, ValueError):
    """Too few entries to classify a profile."""


class CapacityError(ConfigurationError):
    """Requested problem size exceeds the dense solver's limit."""


__all__ = [
    "SpinResError",
    "ConfigurationError",
    "CriticalParametersError",
    "PhaseError",
    "AmbiguousPhaseError",
    "NumericalError",
    "ConsistencyError",
    "NormalizationError",
    "InsufficientDataError",
    "CapacityError",
]
