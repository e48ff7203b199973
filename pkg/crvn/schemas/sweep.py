"""
Pydantic schemas for parameter sweeps over one SVN.
"""
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class SweepParameter(str, Enum):
    """Parameters a sweep can vary."""
    rho = "rho"
    channels = "channels"
    blocking = "blocking"


class SweepBase(BaseModel):
    """
    Fixed parameters of the swept SVN and of its neighbour SVN.

    The swept SVN owns ``n_channels`` identical channels; the neighbour owns
    ``neighbour_channels`` channels with utilization ``neighbour_rho``.
    """
    n_channels: int = Field(4, ge=1)
    rho: float = Field(0.3, ge=0, lt=1)
    su_arrival_rate: float = Field(0.5, gt=0)
    su_service_rate: float = Field(0.5, gt=0)
    mean_demand_bps: float = Field(5e5, gt=0)
    bandwidth_hz: float = Field(1e6, gt=0)
    snr_mean_db: float = Field(10.0, gt=0)
    pu_service_rate: float = Field(1.0, gt=0)
    neighbour_channels: int = Field(4, ge=0)
    neighbour_rho: float = Field(0.3, ge=0, lt=1)
    imposed_channels_per_su: Optional[float] = Field(None, ge=1)
    imposed_blocking: Optional[float] = Field(None, ge=0, le=1)

    model_config = ConfigDict(frozen=True)


class SweepSpec(BaseModel):
    """Swept parameter, its range and the fixed base it modifies."""
    parameter: SweepParameter
    start: float
    stop: float
    steps: int = Field(..., ge=2)
    base: SweepBase = Field(default_factory=SweepBase)
    name: str = "custom"

    @model_validator(mode="after")
    def validate_range(self) -> "SweepSpec":
        """Range is increasing and its endpoints lie in the parameter's domain."""
        if not self.start < self.stop:
            raise ValueError("start must be < stop")
        if self.parameter == SweepParameter.channels and self.start < 1:
            raise ValueError("channel count must be >= 1")
        if self.parameter == SweepParameter.blocking and (self.start < 0 or self.stop > 1):
            raise ValueError("blocking probability must lie in [0, 1]")
        if self.parameter == SweepParameter.rho and self.start < 0:
            raise ValueError("utilization must be >= 0")
        return self

    model_config = ConfigDict(frozen=True)


class SweepRow(BaseModel):
    """Headline metrics of the swept SVN at one sweep point."""
    value: float
    collision: float
    blocking: float
    utilization: float
    su_utilization: float
    handover_attempt: float
    handover: float

    model_config = ConfigDict(frozen=True)


class SweepResult(BaseModel):
    """Rows of a completed sweep, in sweep order."""
    spec: SweepSpec
    rows: List[SweepRow] = Field(default_factory=list)
    skipped: List[float] = Field(default_factory=list)

    model_config = ConfigDict(frozen=True)
