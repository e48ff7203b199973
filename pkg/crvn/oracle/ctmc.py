"""
Two-state continuous-time Markov chain realization of a channel's PU activity.

The chain leaves ON (PU present) at rate μ and leaves OFF at rate μρ/(1 - ρ),
so its stationary ON probability is exactly ρ. This event-level process is a
modelling choice; only the stationary probability is used by the analytics.
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np

from crvn.analytics.channel_model import utilization
from crvn.core.config import settings
from crvn.core.errors import OracleError
from crvn.oracle.streams import Purpose, generator
from crvn.schemas.oracle import OracleEstimate
from crvn.schemas.scenario import Channel


logger = logging.getLogger(__name__)


def off_to_on_rate(channel: Channel) -> float:
    """PU return rate μρ/(1 - ρ)."""
    rho = utilization(channel)
    return channel.pu_service_rate * rho / (1.0 - rho)


def ctmc_standard_error(channel: Channel, horizon_s: float) -> float:
    """
    Asymptotic standard error of the time-average busy fraction.

    The busy indicator's autocovariance is ρ(1 - ρ)·exp(-(μ + r)t), which gives
    a variance of 2ρ(1 - ρ) / ((μ + r)·T) for a horizon T.
    """
    rho = utilization(channel)
    total_rate = channel.pu_service_rate + off_to_on_rate(channel)
    return math.sqrt(2.0 * rho * (1.0 - rho) / (total_rate * horizon_s))


def _holding_times(
    rng: np.random.Generator,
    start_on: bool,
    on_rate: float,
    off_rate: float,
    horizon_s: float,
) -> Tuple[np.ndarray, np.ndarray]:
    """Alternating sojourn times, long enough to cover the horizon."""
    mean_cycle = 1.0 / on_rate + 1.0 / off_rate
    chunk = int(1.2 * horizon_s / mean_cycle) + 16

    durations = []
    states = []
    elapsed = 0.0
    while elapsed < horizon_s:
        on = rng.exponential(1.0 / on_rate, chunk)
        off = rng.exponential(1.0 / off_rate, chunk)
        first, second = (on, off) if start_on else (off, on)
        pair = np.empty(2 * chunk)
        pair[0::2] = first
        pair[1::2] = second
        durations.append(pair)
        states.append(np.tile([start_on, not start_on], chunk))
        elapsed += float(pair.sum())
    return np.concatenate(durations), np.concatenate(states).astype(float)


def simulate_channel_occupancy(
    channel: Channel,
    horizon_s: Optional[float] = None,
    seed: int = 0,
    batches: Optional[int] = None,
    stream: int = 0,
) -> OracleEstimate:
    """
    Time-average PU busy fraction of a simulated channel.

    The chain starts from its stationary law. The horizon is cut into equal
    windows; the estimate is the mean of the window busy fractions and its
    standard error comes from their spread (batch means).

    Args:
        channel: Channel to simulate
        horizon_s: Simulated time (default CTMC_HORIZON_S)
        seed: Base seed
        batches: Number of windows (default CTMC_BATCHES)
        stream: Stream index, one per channel in a validation run

    Returns:
        OracleEstimate of the busy fraction; ``samples`` holds the window count

    Raises:
        OracleError: Nonpositive horizon or fewer than two windows
    """
    horizon = settings.CTMC_HORIZON_S if horizon_s is None else horizon_s
    windows = batches or settings.CTMC_BATCHES
    if horizon <= 0:
        raise OracleError("horizon must be positive")
    if windows < 2:
        raise OracleError("batch means need at least two windows")

    rho = utilization(channel)
    if rho == 0.0:
        return OracleEstimate(value=0.0, std_error=0.0, samples=windows, seed=seed)

    rng = generator(seed, Purpose.OCCUPANCY, stream)
    start_on = bool(rng.random() < rho)
    durations, states = _holding_times(
        rng, start_on, channel.pu_service_rate, off_to_on_rate(channel), horizon
    )

    # Busy time accumulated up to each transition, then up to each window edge.
    transitions = np.concatenate(([0.0], np.cumsum(durations)))
    busy = np.concatenate(([0.0], np.cumsum(durations * states)))
    edges = np.linspace(0.0, horizon, windows + 1)
    segment = np.clip(np.searchsorted(transitions, edges, side="right") - 1, 0, len(durations) - 1)
    busy_at_edges = busy[segment] + (edges - transitions[segment]) * states[segment]

    fractions = np.clip(np.diff(busy_at_edges) / (horizon / windows), 0.0, 1.0)
    value = float(fractions.mean())
    std_error = float(fractions.std(ddof=1) / math.sqrt(windows))
    logger.debug(
        f"Channel '{channel.id}': busy fraction {value:.6g} +/- {std_error:.2g} "
        f"over {len(durations)} sojourns"
    )
    return OracleEstimate(value=value, std_error=std_error, samples=windows, seed=seed)
