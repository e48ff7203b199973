"""
Pydantic schemas for analytic results: channel profiles, count distributions,
per-SVN and layer metrics, constraint checks and PVN summaries.
"""
import math
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class ChannelProfile(BaseModel):
    """PU activity and capacity figures of one channel."""
    channel_id: str
    rho: float = Field(..., ge=0, lt=1, description="PU utilization λ/μ")
    p_off: float = Field(..., gt=0, le=1, description="Probability the channel is PU-free")
    mean_capacity_bps: float = Field(..., gt=0, description="Mean Shannon capacity")
    effective_rate_bps: float = Field(..., ge=0, description="p_off × mean capacity")

    model_config = ConfigDict(frozen=True)


class CountDistribution(BaseModel):
    """Probability mass function over counts 0..n."""
    pmf: Tuple[float, ...] = Field(..., min_length=1)

    @field_validator("pmf")
    @classmethod
    def validate_pmf(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        """Entries are nonnegative and sum to one."""
        if any(p < 0 for p in v):
            raise ValueError("pmf entries must be nonnegative")
        if abs(math.fsum(v) - 1.0) > 1e-12:
            raise ValueError("pmf must sum to 1")
        return v

    def mean(self) -> float:
        return math.fsum(k * p for k, p in enumerate(self.pmf))

    model_config = ConfigDict(frozen=True)


class SvnMetrics(BaseModel):
    """Analytic metrics of one SVN under a given mapping."""
    svn_id: str
    collision_prob: float = Field(..., ge=0, le=1)
    blocking_prob: float = Field(..., ge=0, le=1)
    joint_utilization: float = Field(..., ge=0)
    handover_attempt_prob: float = Field(..., ge=0, le=1)
    handover_prob: float = Field(..., ge=0, le=1)
    channels_per_su: float = Field(..., ge=1)
    mean_channel_rate_bps: float = Field(..., gt=0)
    admitted_sus: float = Field(..., ge=0)
    allocated_rate_bps: float = Field(..., ge=0)
    requested_rate_bps: float = Field(..., ge=0)
    n_channels: int = Field(..., ge=1)

    @property
    def utilization_above_one(self) -> bool:
        return self.joint_utilization > 1.0

    model_config = ConfigDict(frozen=True)


class LayerMetrics(BaseModel):
    """Arithmetic means of the headline metrics over all SVNs of the layer."""
    mean_collision: float
    mean_blocking: float
    mean_utilization: float
    mean_handover: float
    mean_handover_attempt: float

    model_config = ConfigDict(frozen=True)


class ConstraintCheck(BaseModel):
    """One evaluated constraint of the mapping problem."""
    svn_id: str
    constraint: str  # 'collision', 'demand' or 'disjoint'
    margin: float
    satisfied: bool

    model_config = ConfigDict(frozen=True)


class FeasibilityReport(BaseModel):
    """All constraint checks of a mapping."""
    checks: List[ConstraintCheck] = Field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return all(c.satisfied for c in self.checks)

    def violations(self) -> List[ConstraintCheck]:
        return [c for c in self.checks if not c.satisfied]

    model_config = ConfigDict(frozen=True)


class MetricsReport(BaseModel):
    """Per-SVN metrics, layer averages and, when evaluated, the constraint checks."""
    svns: List[SvnMetrics]
    layer: LayerMetrics
    feasibility: Optional[FeasibilityReport] = None

    @model_validator(mode="after")
    def validate_nonempty(self) -> "MetricsReport":
        if not self.svns:
            raise ValueError("report needs at least one SVN")
        return self

    model_config = ConfigDict(frozen=True)


class PvnSummary(BaseModel):
    """Primary-layer view of one PVN's channel set."""
    pvn_id: str
    share: float
    channel_ids: Tuple[str, ...]
    expected_idle_channels: float
    idle_distribution: CountDistribution
    pu_distribution: CountDistribution
    effective_rate_bps: float

    model_config = ConfigDict(frozen=True)
