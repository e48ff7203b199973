"""
Parameter sweeps over one SVN.

A sweep varies the uniform channel utilization, the channel count or an imposed
blocking probability of a "swept" SVN that sits next to a fixed neighbour SVN,
and records the headline metrics at every point. Three presets reproduce the
primary-utilization, channel-count and blocking-probability analyses.
"""
import functools
import logging
import math
from typing import Dict, List, Optional, Tuple

import numpy as np

from crvn.analytics.channel_model import channel_profile, utilization
from crvn.analytics.metrics import (
    SvnOverrides,
    build_svn_context,
    evaluate_contexts,
    su_utilization,
)
from crvn.core.errors import CrvnError, SweepError
from crvn.schemas.metrics import ChannelProfile
from crvn.schemas.scenario import Channel, Scenario, SvnRequest
from crvn.schemas.sweep import SweepBase, SweepParameter, SweepResult, SweepRow, SweepSpec
from crvn.tasks.pool import map_ordered


logger = logging.getLogger(__name__)

SWEPT_SVN = "swept"
NEIGHBOUR_SVN = "neighbour"

PRESETS: Dict[str, Tuple[SweepParameter, float, float, int]] = {
    "fig2": (SweepParameter.rho, 0.05, 0.95, 19),
    "fig3": (SweepParameter.channels, 2, 20, 19),
    "fig4": (SweepParameter.blocking, 0.0, 1.0, 11),
}


def preset_spec(name: str, base: Optional[SweepBase] = None) -> SweepSpec:
    """
    Build one of the named sweep presets.

    The utilization preset imposes one channel per SU on the swept SVN.

    Raises:
        SweepError: Unknown preset name
    """
    if name not in PRESETS:
        raise SweepError(f"unknown preset '{name}', expected one of {', '.join(PRESETS)}")
    parameter, start, stop, steps = PRESETS[name]
    base = base or SweepBase()
    if name == "fig2":
        base = base.model_copy(update={"imposed_channels_per_su": 1.0})
    return SweepSpec(parameter=parameter, start=start, stop=stop, steps=steps, base=base, name=name)


def sweep_base_from_scenario(scenario: Scenario, svn_id: Optional[str] = None) -> SweepBase:
    """
    Derive sweep parameters from a scenario.

    The swept SVN takes the named request (default: the first); channel
    parameters are averaged over the substrate. The swept SVN gets an equal
    share of the channels and the neighbour the rest (at least one each).

    Raises:
        SweepError: Unknown SVN id
    """
    requests = scenario.request_index()
    request = requests.get(svn_id) if svn_id else scenario.svn_requests[0]
    if request is None:
        raise SweepError(f"unknown SVN '{svn_id}'")

    channels = scenario.channels
    count = len(channels)
    n_channels = max(1, count // len(scenario.svn_requests))
    rho = math.fsum(utilization(c) for c in channels) / count
    return SweepBase(
        n_channels=n_channels,
        rho=rho,
        su_arrival_rate=request.su_arrival_rate,
        su_service_rate=request.su_service_rate,
        mean_demand_bps=request.mean_demand_bps,
        bandwidth_hz=math.fsum(c.bandwidth_hz for c in channels) / count,
        snr_mean_db=math.fsum(c.snr_mean_db for c in channels) / count,
        pu_service_rate=math.fsum(c.pu_service_rate for c in channels) / count,
        neighbour_channels=max(1, count - n_channels),
        neighbour_rho=rho,
    )


def _uniform_profiles(prefix: str, n: int, rho: float, base: SweepBase) -> List[ChannelProfile]:
    return [
        channel_profile(
            Channel(
                id=f"{prefix}{i}",
                bandwidth_hz=base.bandwidth_hz,
                pu_arrival_rate=rho * base.pu_service_rate,
                pu_service_rate=base.pu_service_rate,
                snr_mean_db=base.snr_mean_db,
            )
        )
        for i in range(n)
    ]


def _request(svn_id: str, base: SweepBase) -> SvnRequest:
    return SvnRequest(
        svn_id=svn_id,
        su_arrival_rate=base.su_arrival_rate,
        su_service_rate=base.su_service_rate,
        mean_demand_bps=base.mean_demand_bps,
    )


def sweep_point(parameter: SweepParameter, base: SweepBase, value: float) -> SweepRow:
    """
    Headline metrics of the swept SVN at one parameter value.

    Raises:
        SweepError: Value outside the parameter's domain
    """
    n_channels = base.n_channels
    rho = base.rho
    blocking = base.imposed_blocking

    if parameter == SweepParameter.rho:
        if not 0.0 <= value < 1.0:
            raise SweepError(f"utilization {value} outside [0, 1)")
        rho = value
    elif parameter == SweepParameter.channels:
        n_channels = int(round(value))
        if n_channels < 1 or abs(n_channels - value) > 1e-9:
            raise SweepError(f"channel count {value} is not a positive integer")
    else:
        if not 0.0 <= value <= 1.0:
            raise SweepError(f"blocking probability {value} outside [0, 1]")
        blocking = value

    overrides = SvnOverrides(blocking_prob=blocking, channels_per_su=base.imposed_channels_per_su)
    swept = build_svn_context(
        _request(SWEPT_SVN, base), _uniform_profiles("s", n_channels, rho, base), overrides
    )
    contexts = [swept]
    if base.neighbour_channels:
        neighbour_profiles = _uniform_profiles("n", base.neighbour_channels, base.neighbour_rho, base)
        contexts.append(build_svn_context(_request(NEIGHBOUR_SVN, base), neighbour_profiles))

    metrics = evaluate_contexts(contexts).svns[0]
    return SweepRow(
        value=value,
        collision=metrics.collision_prob,
        blocking=metrics.blocking_prob,
        utilization=metrics.joint_utilization,
        su_utilization=su_utilization(
            swept.profiles, swept.su_mean, swept.channels_per_su, swept.blocking_prob
        ),
        handover_attempt=metrics.handover_attempt_prob,
        handover=metrics.handover_prob,
    )


def _safe_point(
    parameter: SweepParameter,
    base: SweepBase,
    value: float,
) -> Tuple[float, Optional[SweepRow], Optional[str]]:
    try:
        return value, sweep_point(parameter, base, value), None
    except (CrvnError, ValueError) as e:
        return value, None, str(e)


def sweep_values(spec: SweepSpec) -> List[float]:
    """Evenly spaced parameter values from start to stop inclusive."""
    return [float(v) for v in np.linspace(spec.start, spec.stop, spec.steps)]


def run_sweep(spec: SweepSpec, workers: Optional[int] = None) -> SweepResult:
    """
    Evaluate every point of a sweep.

    Points outside the parameter's domain are skipped with a warning; rows are
    returned in sweep order.

    Args:
        spec: Sweep specification
        workers: Process count (default WORKERS)

    Returns:
        SweepResult with one row per evaluated point
    """
    job = functools.partial(_safe_point, spec.parameter, spec.base)
    outcomes = map_ordered(job, sweep_values(spec), workers)

    rows: List[SweepRow] = []
    skipped: List[float] = []
    for value, row, error in outcomes:
        if row is None:
            logger.warning(f"Skipping {spec.parameter.value}={value:g}: {error}")
            skipped.append(value)
        else:
            rows.append(row)

    logger.info(
        f"Sweep '{spec.name}' over {spec.parameter.value}: {len(rows)} point(s), {len(skipped)} skipped"
    )
    return SweepResult(spec=spec, rows=rows, skipped=skipped)
