"""
Count sampler: direct sampling of the PU and SU counts behind the collision,
blocking and handover-attempt events, and of the exponential-dB SNR behind the
mean channel capacity.
"""
import logging
from typing import Dict, Sequence

import numpy as np

from crvn.analytics.channel_model import log2_one_plus_snr
from crvn.analytics.metrics import (
    SvnContext,
    handover_channels_per_su,
    handover_from_attempts,
    spare_capacity,
)
from crvn.core.errors import OracleError
from crvn.oracle.streams import Purpose, RunningMoments, batches, generator
from crvn.schemas.metrics import ChannelProfile
from crvn.schemas.oracle import OracleEstimate
from crvn.schemas.scenario import Channel


logger = logging.getLogger(__name__)


def _event_moments(
    rhos: np.ndarray,
    su_mean: float,
    chsu: float,
    samples: int,
    seed: int,
    purpose: Purpose,
    stream: int,
) -> Dict[str, RunningMoments]:
    n = len(rhos)
    moments = {"collision": RunningMoments(), "blocking": RunningMoments()}
    for batch, size in batches(samples):
        rng = generator(seed, purpose, stream, batch)
        npu = (rng.random((size, n)) < rhos).sum(axis=1)
        nsu = rng.poisson(su_mean, size)
        # SUs the free channels can carry, given each SU takes chsu channels.
        capacity = np.floor((n - npu) / chsu)
        blocked = nsu > capacity
        moments["blocking"].add(blocked)
        moments["collision"].add(blocked & (npu >= 1))
    return moments


def sample_metrics(
    channel_set: Sequence[ChannelProfile],
    su_mean: float,
    chsu: float,
    samples: int,
    seed: int,
    stream: int = 0,
) -> Dict[str, OracleEstimate]:
    """
    Estimate collision and blocking probabilities by sampling.

    Each sample draws every channel's PU indicator as Bernoulli(ρ_i) and the SU
    count as Poisson(su_mean), then records whether the SUs need more channels
    than the PUs leave free (blocking), and whether that happens with at least
    one PU present (collision).

    Args:
        channel_set: Channels of the SVN
        su_mean: Poisson mean of the SU count
        chsu: Channels per SU (>= 1)
        samples: Number of samples (>= 1)
        seed: Base seed
        stream: Stream index, so several SVNs can share a seed

    Returns:
        {"collision": estimate, "blocking": estimate}

    Raises:
        OracleError: Empty channel set or invalid arguments
    """
    if not channel_set:
        raise OracleError("sampling needs at least one channel")
    if chsu < 1 or su_mean < 0:
        raise OracleError("chsu must be >= 1 and su_mean nonnegative")

    rhos = np.array([p.rho for p in channel_set])
    moments = _event_moments(rhos, su_mean, chsu, samples, seed, Purpose.METRICS, stream)
    estimates = {name: m.estimate(seed) for name, m in moments.items()}
    logger.debug(
        f"Sampled {samples} draws over {len(rhos)} channels: "
        f"collision={estimates['collision'].value:.6g}, blocking={estimates['blocking'].value:.6g}"
    )
    return estimates


def sample_mean_capacity(
    channel: Channel,
    samples: int,
    seed: int,
    stream: int = 0,
) -> OracleEstimate:
    """
    Monte Carlo estimate of E[Bw·log2(1 + 10^(X/10))] with X exponential in dB.

    Args:
        channel: Channel whose bandwidth and mean SNR are used
        samples: Number of SNR draws
        seed: Base seed
        stream: Stream index, one per channel in a validation run
    """
    moments = RunningMoments()
    for batch, size in batches(samples):
        rng = generator(seed, Purpose.CAPACITY, stream, batch)
        snr_db = rng.exponential(channel.snr_mean_db, size)
        moments.add(channel.bandwidth_hz * log2_one_plus_snr(snr_db))
    return moments.estimate(seed)


def sample_handover_chain(
    contexts: Sequence[SvnContext],
    samples: int,
    seed: int,
) -> Dict[str, Dict[str, OracleEstimate]]:
    """
    Estimate the handover attempt and success probabilities of every SVN.

    The attempt event is sampled with the admitted SU load (Poisson with mean
    (1 - Pb)·N̄SU); the success probability follows from the sampled attempt
    probability through the same spare-capacity arithmetic as the analytic chain.
    Success is 1-Lipschitz in the attempt probability, so it inherits its
    standard error.

    Args:
        contexts: Every SVN of the mapping, blocking already evaluated
        samples: Number of samples per SVN
        seed: Base seed

    Returns:
        {svn_id: {"handover_attempt": estimate, "handover": estimate}}
    """
    results: Dict[str, Dict[str, OracleEstimate]] = {}
    for index, target in enumerate(contexts):
        rhos = np.array([p.rho for p in target.profiles])
        admitted = target.admitted_sus
        attempt = _event_moments(
            rhos, admitted, target.channels_per_su, samples, seed, Purpose.HANDOVER, index
        )["collision"].estimate(seed)

        success = handover_from_attempts(
            attempt.value,
            admitted,
            spare_capacity(target, contexts),
            handover_channels_per_su(target, contexts),
        )
        results[target.svn_id] = {
            "handover_attempt": attempt,
            "handover": OracleEstimate(
                value=success,
                std_error=attempt.std_error,
                samples=attempt.samples,
                seed=seed,
            ),
        }
    return results
