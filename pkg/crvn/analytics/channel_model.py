"""
Per-channel PU activity and capacity.

A channel is busy with a PU with probability ρ = λ/μ. Its instantaneous capacity
follows Shannon's law with an SNR whose dB value is exponentially distributed;
the mean capacity has no closed form and is integrated numerically.
"""
import logging
import math
from functools import lru_cache
from typing import Iterable, List, Union

import numpy as np
from scipy.integrate import quad

from crvn.core.config import settings
from crvn.core.errors import CapacityIntegrationError
from crvn.schemas.metrics import ChannelProfile
from crvn.schemas.scenario import Channel


logger = logging.getLogger(__name__)

LN10_OVER_10 = math.log(10.0) / 10.0


def utilization(channel: Channel) -> float:
    """PU utilization ρ = λ/μ of a channel."""
    return channel.pu_arrival_rate / channel.pu_service_rate


def log2_one_plus_snr(snr_db: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """log2(1 + 10^(snr_db/10)) evaluated in log space, finite for any finite dB value."""
    return np.logaddexp(0.0, np.multiply(snr_db, LN10_OVER_10)) / math.log(2.0)


def shannon_capacity(bandwidth_hz: float, snr_db: float) -> float:
    """
    Shannon capacity for an SNR given in dB.

    Args:
        bandwidth_hz: Channel bandwidth in Hz
        snr_db: Signal-to-noise ratio in dB (may be -inf)

    Returns:
        Capacity in bps
    """
    return float(bandwidth_hz * log2_one_plus_snr(snr_db))


@lru_cache(maxsize=4096)
def _unit_capacity_moment(snr_mean_db: float, order: int = 1) -> float:
    """E[log2(1 + 10^(X/10))^order] for X exponential with the given mean (dB)."""
    # Truncate where the exponential tail mass drops below QUAD_TAIL_MASS.
    upper = snr_mean_db * math.log(1.0 / settings.QUAD_TAIL_MASS)

    def integrand(x: float) -> float:
        return float(log2_one_plus_snr(x)) ** order * math.exp(-x / snr_mean_db) / snr_mean_db

    result = quad(
        integrand,
        0.0,
        upper,
        epsabs=0.0,
        epsrel=settings.QUAD_EPSREL,
        limit=200,
        full_output=1,
    )
    if len(result) > 3:
        message = result[3]
        logger.error(f"Capacity quadrature failed for snr_mean_db={snr_mean_db}: {message}")
        raise CapacityIntegrationError(
            f"mean capacity quadrature did not converge (snr_mean_db={snr_mean_db}): {message}"
        )

    return result[0]


def mean_capacity(channel: Channel) -> float:
    """
    Mean Shannon capacity E[Bw·log2(1 + 10^(X/10))] with X ~ Exp(mean snr_mean_db).

    Values are cached per mean SNR; the integral is evaluated for a
    bandwidth-free integrand and scaled, so doubling the bandwidth doubles
    the result exactly.

    Raises:
        CapacityIntegrationError: If the adaptive quadrature does not converge
    """
    return _unit_capacity_moment(channel.snr_mean_db) * channel.bandwidth_hz


def capacity_std(channel: Channel) -> float:
    """Standard deviation of the instantaneous Shannon capacity (bps)."""
    first = _unit_capacity_moment(channel.snr_mean_db)
    second = _unit_capacity_moment(channel.snr_mean_db, 2)
    return math.sqrt(max(0.0, second - first**2)) * channel.bandwidth_hz


def effective_rate(channel: Channel) -> float:
    """Mean capacity discounted by the probability the channel is PU-free."""
    return (1.0 - utilization(channel)) * mean_capacity(channel)


def channel_profile(channel: Channel) -> ChannelProfile:
    """Bundle utilization, OFF probability and capacity figures of a channel."""
    rho = utilization(channel)
    p_off = 1.0 - rho
    capacity = mean_capacity(channel)
    return ChannelProfile(
        channel_id=channel.id,
        rho=rho,
        p_off=p_off,
        mean_capacity_bps=capacity,
        effective_rate_bps=p_off * capacity,
    )


def channel_profiles(channels: Iterable[Channel]) -> List[ChannelProfile]:
    return [channel_profile(c) for c in channels]
