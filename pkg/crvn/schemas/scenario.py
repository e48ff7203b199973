"""
Pydantic schemas for the three-layer environment: substrate channels, PVN shares,
SVN requests and the scenario document that bundles them.
"""
import math
from typing import Annotated, Any, Dict, Tuple

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, field_validator, model_validator

from crvn.core.config import settings


def _coerce_identifier(v: Any) -> Any:
    """JSON integers are accepted as ids and normalised to strings."""
    if isinstance(v, int) and not isinstance(v, bool):
        return str(v)
    return v


Identifier = Annotated[str, BeforeValidator(_coerce_identifier), Field(min_length=1)]


def _require_positive(v: float) -> float:
    if not math.isfinite(v) or v <= 0:
        raise ValueError("must be positive")
    return v


class Channel(BaseModel):
    """One substrate channel with its PU activity rates and SNR statistics."""
    id: Identifier = Field(..., description="Channel identifier")
    bandwidth_hz: float = Field(..., description="Channel bandwidth in Hz")
    pu_arrival_rate: float = Field(..., description="PU arrival rate (arrivals/s)")
    pu_service_rate: float = Field(..., description="PU service rate (1/s)")
    snr_mean_db: float = Field(..., description="Mean of the exponential SNR in dB")

    @field_validator("bandwidth_hz", "pu_service_rate", "snr_mean_db")
    @classmethod
    def validate_positive(cls, v: float) -> float:
        """Bandwidth, PU service rate and mean SNR must be strictly positive."""
        return _require_positive(v)

    @field_validator("pu_arrival_rate")
    @classmethod
    def validate_nonnegative(cls, v: float) -> float:
        """PU arrival rate may be zero (idle channel) but not negative."""
        if not math.isfinite(v) or v < 0:
            raise ValueError("must be nonnegative")
        return v

    @model_validator(mode="after")
    def validate_stability(self) -> "Channel":
        """The PU utilization λ/μ must stay below one."""
        if self.pu_arrival_rate / self.pu_service_rate >= 1:
            raise ValueError("utilization must be < 1")
        return self

    model_config = ConfigDict(frozen=True, extra="forbid")


class PvnShare(BaseModel):
    """Fraction q_j of the substrate channels allocated to one PVN."""
    pvn_id: Identifier
    share: float = Field(..., ge=0, le=1, description="Share q_j in [0, 1]")

    model_config = ConfigDict(frozen=True, extra="forbid")


class SvnRequest(BaseModel):
    """Secondary demand of one SVN: SU arrival/service rates and mean per-SU rate."""
    svn_id: Identifier
    su_arrival_rate: float = Field(..., description="SU arrival rate (users/s)")
    su_service_rate: float = Field(..., description="SU service rate (1/s)")
    mean_demand_bps: float = Field(..., description="Mean rate requested per SU (bps)")

    @field_validator("su_arrival_rate", "su_service_rate", "mean_demand_bps")
    @classmethod
    def validate_positive(cls, v: float) -> float:
        """All SVN request fields are strictly positive."""
        return _require_positive(v)

    model_config = ConfigDict(frozen=True, extra="forbid")


class Scenario(BaseModel):
    """
    Scenario document: substrate channels, PVN shares, SVN requests and the
    global collision threshold.
    """
    channels: Tuple[Channel, ...] = Field(..., min_length=1)
    pvn_shares: Tuple[PvnShare, ...] = Field(..., min_length=1)
    svn_requests: Tuple[SvnRequest, ...] = Field(..., min_length=1)
    collision_threshold: float = Field(..., ge=0, le=1)

    @field_validator("channels")
    @classmethod
    def validate_unique_channels(cls, v: Tuple[Channel, ...]) -> Tuple[Channel, ...]:
        """Channel ids are unique."""
        ids = [c.id for c in v]
        if len(set(ids)) != len(ids):
            raise ValueError("channel ids must be unique")
        return v

    @field_validator("pvn_shares")
    @classmethod
    def validate_shares(cls, v: Tuple[PvnShare, ...]) -> Tuple[PvnShare, ...]:
        """PVN ids are unique and shares sum to one."""
        ids = [s.pvn_id for s in v]
        if len(set(ids)) != len(ids):
            raise ValueError("pvn ids must be unique")
        total = math.fsum(s.share for s in v)
        if abs(total - 1.0) > settings.SHARE_TOLERANCE:
            raise ValueError(f"shares must sum to 1 (got {total:.12g})")
        return v

    @field_validator("svn_requests")
    @classmethod
    def validate_unique_svns(cls, v: Tuple[SvnRequest, ...]) -> Tuple[SvnRequest, ...]:
        """SVN ids are unique."""
        ids = [r.svn_id for r in v]
        if len(set(ids)) != len(ids):
            raise ValueError("svn ids must be unique")
        return v

    def channel_index(self) -> Dict[str, Channel]:
        return {c.id: c for c in self.channels}

    def request_index(self) -> Dict[str, SvnRequest]:
        return {r.svn_id: r for r in self.svn_requests}

    model_config = ConfigDict(
        frozen=True,
        extra="forbid",
        json_schema_extra={
            "example": {
                "channels": [
                    {
                        "id": "c1",
                        "bandwidth_hz": 1e6,
                        "pu_arrival_rate": 0.3,
                        "pu_service_rate": 1.0,
                        "snr_mean_db": 10,
                    }
                ],
                "pvn_shares": [{"pvn_id": "p1", "share": 1.0}],
                "svn_requests": [
                    {
                        "svn_id": "s1",
                        "su_arrival_rate": 0.5,
                        "su_service_rate": 0.5,
                        "mean_demand_bps": 5e5,
                    }
                ],
                "collision_threshold": 0.2,
            }
        },
    )


class PvnAllocation(BaseModel):
    """Channel sets Q_j per PVN, in share order."""
    sets: Dict[str, Tuple[str, ...]]

    def sizes(self) -> Dict[str, int]:
        return {pvn_id: len(ids) for pvn_id, ids in self.sets.items()}

    model_config = ConfigDict(frozen=True)


class Mapping(BaseModel):
    """
    Assignment of channel-id sets SC_l to SVNs.

    Construction does not enforce disjointness; constraint checks report overlaps.
    """
    assignments: Dict[Identifier, Tuple[Identifier, ...]] = Field(default_factory=dict)

    def channel_sets(self, scenario: Scenario) -> Dict[str, Tuple[str, ...]]:
        """Every SVN of the scenario, in request order; absent SVNs map to ()."""
        return {r.svn_id: tuple(self.assignments.get(r.svn_id, ())) for r in scenario.svn_requests}

    def overlapping_channels(self) -> Dict[str, Tuple[str, ...]]:
        """Channels claimed by more than one SVN, with the claiming SVN ids."""
        owners: Dict[str, list] = {}
        for svn_id, channel_ids in self.assignments.items():
            for channel_id in dict.fromkeys(channel_ids):
                owners.setdefault(channel_id, []).append(svn_id)
        return {cid: tuple(svns) for cid, svns in owners.items() if len(svns) > 1}

    model_config = ConfigDict(
        frozen=True,
        extra="forbid",
        json_schema_extra={"example": {"assignments": {"s1": ["c1", "c2"]}}},
    )
