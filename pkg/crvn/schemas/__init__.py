"""Pydantic schemas module."""
from crvn.schemas.metrics import (
    ChannelProfile,
    ConstraintCheck,
    CountDistribution,
    FeasibilityReport,
    LayerMetrics,
    MetricsReport,
    PvnSummary,
    SvnMetrics,
)
from crvn.schemas.oracle import OracleCheck, OracleEstimate, ValidationReport
from crvn.schemas.scenario import (
    Channel,
    Mapping,
    PvnAllocation,
    PvnShare,
    Scenario,
    SvnRequest,
)
from crvn.schemas.solution import CandidateSolution, Objectives, ParetoFront
from crvn.schemas.sweep import SweepBase, SweepParameter, SweepResult, SweepRow, SweepSpec

__all__ = [
    "CandidateSolution",
    "Channel",
    "ChannelProfile",
    "ConstraintCheck",
    "CountDistribution",
    "FeasibilityReport",
    "LayerMetrics",
    "Mapping",
    "MetricsReport",
    "Objectives",
    "OracleCheck",
    "OracleEstimate",
    "ParetoFront",
    "PvnAllocation",
    "PvnShare",
    "PvnSummary",
    "Scenario",
    "SvnMetrics",
    "SvnRequest",
    "SweepBase",
    "SweepParameter",
    "SweepResult",
    "SweepRow",
    "SweepSpec",
    "ValidationReport",
]
