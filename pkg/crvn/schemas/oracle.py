"""
Pydantic schemas for Monte Carlo oracle estimates and validation reports.
"""
from typing import List

from pydantic import BaseModel, ConfigDict, Field


class OracleEstimate(BaseModel):
    """A Monte Carlo estimate with its standard error and provenance."""
    value: float
    std_error: float = Field(..., ge=0)
    samples: int = Field(..., ge=1)
    seed: int = Field(..., ge=0)

    model_config = ConfigDict(frozen=True)


class OracleCheck(BaseModel):
    """Comparison of one analytic value against its oracle estimate."""
    metric: str
    subject: str
    analytic: float
    estimate: float
    std_error: float
    tolerance: float
    passed: bool

    model_config = ConfigDict(frozen=True)


class ValidationReport(BaseModel):
    """All oracle checks of one validation run."""
    checks: List[OracleCheck] = Field(default_factory=list)
    samples: int
    seed: int
    occupancy_process: str = "two-state CTMC, OFF->ON rate mu*rho/(1-rho)"

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[OracleCheck]:
        return [c for c in self.checks if not c.passed]

    model_config = ConfigDict(frozen=True)
