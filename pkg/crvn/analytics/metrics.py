"""
Analytic per-SVN and layer-average metrics: collision, blocking, joint
utilization and the SVN handover chain.

All values are steady-state expectations; handover arithmetic stays in the reals.
"""
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field
from scipy.stats import poisson

from crvn.analytics.channel_model import channel_profile
from crvn.analytics.occupancy import pu_count_distribution, su_count_exceeds
from crvn.analytics.scenario import validate_mapping
from crvn.core.errors import EmptyChannelSetError, MappingError
from crvn.schemas.metrics import (
    ChannelProfile,
    ConstraintCheck,
    FeasibilityReport,
    LayerMetrics,
    MetricsReport,
    SvnMetrics,
)
from crvn.schemas.scenario import Mapping, Scenario, SvnRequest


logger = logging.getLogger(__name__)


class SvnOverrides(BaseModel):
    """Values imposed on one SVN instead of being derived."""
    blocking_prob: Optional[float] = Field(None, ge=0, le=1)
    channels_per_su: Optional[float] = Field(None, ge=1)

    model_config = ConfigDict(frozen=True)


class SvnContext(BaseModel):
    """Everything the handover chain needs to know about one SVN."""
    svn_id: str
    profiles: Tuple[ChannelProfile, ...] = Field(..., min_length=1)
    su_mean: float = Field(..., ge=0)
    mean_demand_bps: float = Field(..., gt=0)
    channels_per_su: float = Field(..., ge=1)
    collision_prob: float
    blocking_prob: float

    @property
    def n_channels(self) -> int:
        return len(self.profiles)

    @property
    def admitted_sus(self) -> float:
        return (1.0 - self.blocking_prob) * self.su_mean

    def occupied_channels(self) -> float:
        """Mean PU count plus channels held by admitted SUs."""
        return mean_pu_count(self.profiles) + self.admitted_sus * self.channels_per_su

    model_config = ConfigDict(frozen=True)


def _clamp_probability(p: float) -> float:
    return min(1.0, max(0.0, p))


def _require_channels(channel_set: Sequence[ChannelProfile]) -> None:
    if not channel_set:
        raise EmptyChannelSetError("metric needs at least one channel")


def su_demand(request: SvnRequest) -> Tuple[float, float]:
    """
    Mean SU population and the aggregate rate it requests.

    Returns:
        (mean number of SUs λ/μ, requested rate in bps)
    """
    mean_sus = request.su_arrival_rate / request.su_service_rate
    return mean_sus, mean_sus * request.mean_demand_bps


def mean_channel_rate(channel_set: Sequence[ChannelProfile]) -> float:
    """Average effective rate over a channel set."""
    _require_channels(channel_set)
    return math.fsum(p.effective_rate_bps for p in channel_set) / len(channel_set)


def channels_per_su(mean_demand_bps: float, channel_set: Sequence[ChannelProfile]) -> float:
    """Channels an SU needs on average, never fewer than one."""
    return max(1.0, mean_demand_bps / mean_channel_rate(channel_set))


def mean_pu_count(channel_set: Sequence[ChannelProfile]) -> float:
    """n minus the expected idle channels, i.e. Σρ_i."""
    return math.fsum(p.rho for p in channel_set)


def _tail_sum(
    channel_set: Sequence[ChannelProfile],
    su_mean: float,
    chsu: float,
    first_busy: int,
) -> float:
    _require_channels(channel_set)
    if chsu < 1:
        raise ValueError("channels per SU must be >= 1")
    if su_mean < 0:
        raise ValueError("SU mean must be nonnegative")

    n = len(channel_set)
    pmf = pu_count_distribution([p.rho for p in channel_set]).pmf
    total = math.fsum(
        pmf[i] * su_count_exceeds(su_mean, math.floor((n - i) / chsu))
        for i in range(first_busy, n + 1)
    )
    return _clamp_probability(total)


def collision_probability(
    channel_set: Sequence[ChannelProfile],
    su_mean: float,
    chsu: float,
) -> float:
    """
    Probability that at least one PU is present and the SUs need more channels
    than the PUs leave free.

    Args:
        channel_set: Channels of the SVN
        su_mean: Poisson mean of the SU count
        chsu: Channels needed per SU (real, >= 1)
    """
    return _tail_sum(channel_set, su_mean, chsu, first_busy=1)


def collision_probability_single_demand(
    channel_set: Sequence[ChannelProfile],
    su_mean: float,
) -> float:
    """
    Collision probability when each SU needs exactly one channel:
    Σ_{i>=1} P[NPU = i] · P[NSU > n - i], with the Poisson survival function.
    """
    _require_channels(channel_set)
    if su_mean == 0:
        return 0.0
    n = len(channel_set)
    pmf = pu_count_distribution([p.rho for p in channel_set]).pmf
    return _clamp_probability(
        math.fsum(pmf[i] * float(poisson.sf(n - i, su_mean)) for i in range(1, n + 1))
    )


def blocking_probability(
    channel_set: Sequence[ChannelProfile],
    su_mean: float,
    chsu: float,
) -> float:
    """Same sum as the collision probability, including the zero-PU term."""
    return _tail_sum(channel_set, su_mean, chsu, first_busy=0)


def joint_utilization(
    channel_set: Sequence[ChannelProfile],
    su_mean: float,
    chsu: float,
    blocking: float,
) -> float:
    """
    Fraction of the SVN's channels held by PUs or admitted SUs.

    Not clamped to one; extreme inputs can exceed it.
    """
    _require_channels(channel_set)
    n = len(channel_set)
    return (mean_pu_count(channel_set) + (1.0 - blocking) * su_mean * chsu) / n


def su_utilization(
    channel_set: Sequence[ChannelProfile],
    su_mean: float,
    chsu: float,
    blocking: float,
) -> float:
    """SU-contributed part of the joint utilization."""
    _require_channels(channel_set)
    return (1.0 - blocking) * su_mean * chsu / len(channel_set)


def allocated_rate(channel_set: Sequence[ChannelProfile]) -> float:
    """Sum of effective rates over the allocated channels."""
    return math.fsum(p.effective_rate_bps for p in channel_set)


def spare_capacity(target: SvnContext, all_svns: Sequence[SvnContext]) -> float:
    """Channels left unused, on average, across every SVN other than the target."""
    spare = math.fsum(
        ctx.n_channels - ctx.occupied_channels()
        for ctx in all_svns
        if ctx.svn_id != target.svn_id
    )
    return max(0.0, spare)


def handover_channels_per_su(target: SvnContext, all_svns: Sequence[SvnContext]) -> Optional[float]:
    """
    Channels a handed-over SU needs on the pooled channels of the other SVNs.

    Returns None when no other SVN holds a channel.
    """
    pooled = [p for ctx in all_svns if ctx.svn_id != target.svn_id for p in ctx.profiles]
    if not pooled:
        return None
    return channels_per_su(target.mean_demand_bps, pooled)


def handover_from_attempts(
    attempt_prob: float,
    admitted: float,
    spare: float,
    chsu_star: Optional[float],
) -> float:
    """
    Successful handover probability given the attempt probability.

    NH = min(NHA·ChSU*, R) / ChSU* with NHA = attempt·NAd; the result is NH/NAd,
    zero when nothing is admitted or there is nowhere to go.
    """
    if admitted <= 0 or chsu_star is None:
        return 0.0
    attempts = attempt_prob * admitted
    successes = min(attempts * chsu_star, spare) / chsu_star
    return _clamp_probability(successes / admitted)


def handover_chain(target: SvnContext, all_svns: Sequence[SvnContext]) -> Tuple[float, float]:
    """
    SVN handover attempt and success probabilities of one SVN.

    The attempt probability is the collision probability recomputed with the
    admitted SU load; successes are capped by the spare channels of the other SVNs.

    Args:
        target: SVN being evaluated
        all_svns: Every SVN of the mapping (the target included)

    Returns:
        (attempt probability, handover probability)
    """
    admitted = target.admitted_sus
    attempt = collision_probability(target.profiles, admitted, target.channels_per_su)
    handover = handover_from_attempts(
        attempt,
        admitted,
        spare_capacity(target, all_svns),
        handover_channels_per_su(target, all_svns),
    )
    return attempt, handover


def svn_constraint_checks(
    svn_id: str,
    collision: float,
    allocated: float,
    requested: float,
    threshold: float,
) -> List[ConstraintCheck]:
    """
    Collision and demand constraints of one SVN.

    Margins are thr - Pc and Ralloc - Bw_req; the collision bound is strict.
    """
    return [
        ConstraintCheck(
            svn_id=svn_id,
            constraint="collision",
            margin=threshold - collision,
            satisfied=collision < threshold,
        ),
        ConstraintCheck(
            svn_id=svn_id,
            constraint="demand",
            margin=allocated - requested,
            satisfied=allocated >= requested,
        ),
    ]


def layer_averages(per_svn: Sequence[SvnMetrics]) -> LayerMetrics:
    """Arithmetic means of the headline metrics over all SVNs."""
    if not per_svn:
        raise ValueError("layer averages need at least one SVN")
    n = len(per_svn)
    return LayerMetrics(
        mean_collision=math.fsum(m.collision_prob for m in per_svn) / n,
        mean_blocking=math.fsum(m.blocking_prob for m in per_svn) / n,
        mean_utilization=math.fsum(m.joint_utilization for m in per_svn) / n,
        mean_handover=math.fsum(m.handover_prob for m in per_svn) / n,
        mean_handover_attempt=math.fsum(m.handover_attempt_prob for m in per_svn) / n,
    )


def build_svn_context(
    request: SvnRequest,
    profiles: Sequence[ChannelProfile],
    overrides: Optional[SvnOverrides] = None,
) -> SvnContext:
    """Derive N̄SU, ChSU, collision and blocking for one SVN."""
    _require_channels(profiles)
    su_mean, _ = su_demand(request)
    chsu = channels_per_su(request.mean_demand_bps, profiles)
    if overrides and overrides.channels_per_su is not None:
        chsu = overrides.channels_per_su

    collision = collision_probability(profiles, su_mean, chsu)
    blocking = blocking_probability(profiles, su_mean, chsu)
    if overrides and overrides.blocking_prob is not None:
        blocking = overrides.blocking_prob

    return SvnContext(
        svn_id=request.svn_id,
        profiles=tuple(profiles),
        su_mean=su_mean,
        mean_demand_bps=request.mean_demand_bps,
        channels_per_su=chsu,
        collision_prob=collision,
        blocking_prob=blocking,
    )


def svn_metrics(target: SvnContext, all_svns: Sequence[SvnContext]) -> SvnMetrics:
    """Full metric set of one SVN in the context of the whole mapping."""
    attempt, handover = handover_chain(target, all_svns)
    return SvnMetrics(
        svn_id=target.svn_id,
        collision_prob=target.collision_prob,
        blocking_prob=target.blocking_prob,
        joint_utilization=joint_utilization(
            target.profiles, target.su_mean, target.channels_per_su, target.blocking_prob
        ),
        handover_attempt_prob=attempt,
        handover_prob=handover,
        channels_per_su=target.channels_per_su,
        mean_channel_rate_bps=mean_channel_rate(target.profiles),
        admitted_sus=target.admitted_sus,
        allocated_rate_bps=allocated_rate(target.profiles),
        requested_rate_bps=target.su_mean * target.mean_demand_bps,
        n_channels=target.n_channels,
    )


def evaluate_contexts(contexts: Sequence[SvnContext]) -> MetricsReport:
    """Metrics of every SVN plus the layer averages."""
    per_svn = [svn_metrics(ctx, contexts) for ctx in contexts]
    return MetricsReport(svns=per_svn, layer=layer_averages(per_svn))


def mapping_contexts(
    scenario: Scenario,
    mapping: Mapping,
    overrides: Optional[Dict[str, SvnOverrides]] = None,
) -> List[SvnContext]:
    """
    Build the per-SVN contexts of a complete, disjoint mapping.

    Raises:
        MappingError: Unknown ids or a channel assigned to two SVNs
        EmptyChannelSetError: An SVN without channels
    """
    validate_mapping(mapping, scenario)
    overlaps = mapping.overlapping_channels()
    if overlaps:
        listed = ", ".join(f"{cid} ({'/'.join(svns)})" for cid, svns in sorted(overlaps.items()))
        raise MappingError(f"channels assigned to more than one SVN: {listed}")

    channels = scenario.channel_index()
    overrides = overrides or {}
    contexts = []
    for request in scenario.svn_requests:
        channel_ids = mapping.channel_sets(scenario)[request.svn_id]
        if not channel_ids:
            raise EmptyChannelSetError(f"SVN '{request.svn_id}' has no channels")
        profiles = [channel_profile(channels[cid]) for cid in dict.fromkeys(channel_ids)]
        contexts.append(build_svn_context(request, profiles, overrides.get(request.svn_id)))
    return contexts


def evaluate_mapping(
    scenario: Scenario,
    mapping: Mapping,
    overrides: Optional[Dict[str, SvnOverrides]] = None,
) -> MetricsReport:
    """
    Evaluate every analytic metric of a mapping.

    Args:
        scenario: Validated scenario
        mapping: Disjoint mapping giving every SVN at least one channel
        overrides: Optional imposed values per SVN id

    Returns:
        MetricsReport with per-SVN metrics, layer averages and constraint checks
    """
    report = evaluate_contexts(mapping_contexts(scenario, mapping, overrides))
    checks = []
    for m in report.svns:
        checks.extend(
            svn_constraint_checks(
                m.svn_id,
                m.collision_prob,
                m.allocated_rate_bps,
                m.requested_rate_bps,
                scenario.collision_threshold,
            )
        )
        # Overlaps were rejected above.
        checks.append(ConstraintCheck(svn_id=m.svn_id, constraint="disjoint", margin=0.0, satisfied=True))
    report = report.model_copy(update={"feasibility": FeasibilityReport(checks=checks)})
    logger.debug(f"Evaluated mapping over {len(report.svns)} SVNs: {report.layer}")
    return report
