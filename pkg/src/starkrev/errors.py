"""Exception types shared across the package."""


class StarkRevError(Exception):
    """Base class for all package errors."""


class DomainError(StarkRevError, ValueError):
    """An input violates a documented precondition."""


class AboveThresholdError(DomainError):
    """A requested field strength lies at or above the classical ionization threshold.

    Carries the threshold so callers can report it.
    """

    def __init__(self, message: str, f_c_au: float):
        super().__init__(message)
        self.f_c_au = f_c_au


class ConstructionError(DomainError):
    """Wave-packet construction produced no surviving levels."""


class ConfigurationError(StarkRevError):
    """Inconsistent objects were combined (e.g. packet and phase model fields differ)."""


class PeriodSearchError(StarkRevError):
    """No minimal period was found below the search bound; inputs are inconsistent."""
