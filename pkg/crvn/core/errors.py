"""
Exception hierarchy shared by every module.

Each exception carries the CLI exit code used when it escapes a command.
"""
from typing import List, Optional


class CrvnError(Exception):
    """Base exception for all library errors."""

    exit_code: int = 2


class ScenarioValidationError(CrvnError):
    """Raised when a scenario document violates one or more invariants."""

    def __init__(self, diagnostics: List[str], message: Optional[str] = None):
        self.diagnostics = list(diagnostics)
        super().__init__(message or "; ".join(self.diagnostics))


class MappingError(CrvnError):
    """Raised when a mapping references unknown ids or overlaps where it must not."""
    pass


class EmptyChannelSetError(CrvnError):
    """Raised when a metric needs at least one channel and gets none."""
    pass


class CapacityIntegrationError(CrvnError):
    """Raised when the mean-capacity quadrature does not converge."""
    pass


class BudgetExceededError(CrvnError):
    """Raised when exhaustive enumeration would exceed the assignment budget."""

    exit_code = 3


class InfeasibleError(CrvnError):
    """Raised when no mapping satisfies the constraints."""

    exit_code = 4


class OracleError(CrvnError):
    """Raised for invalid oracle arguments."""
    pass


class SweepError(CrvnError):
    """Raised for an invalid sweep specification."""
    pass
