"""
Oracle validation run: every analytic quantity of a mapping next to its
independent Monte Carlo estimate.
"""
import functools
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

from crvn.analytics.channel_model import capacity_std, mean_capacity, utilization
from crvn.analytics.metrics import SvnContext, evaluate_contexts, mapping_contexts
from crvn.core.config import settings
from crvn.core.errors import OracleError
from crvn.oracle.ctmc import ctmc_standard_error, simulate_channel_occupancy
from crvn.oracle.sampler import sample_handover_chain, sample_mean_capacity, sample_metrics
from crvn.schemas.oracle import OracleCheck, OracleEstimate, ValidationReport
from crvn.schemas.scenario import Channel, Mapping, Scenario
from crvn.tasks.pool import map_ordered


logger = logging.getLogger(__name__)

# Exact agreement (e.g. both sides zero) passes even with a zero-width window.
EXACT_TOLERANCE = 1e-12


def binomial_std_error(p: float, samples: int) -> float:
    """Standard error of a sampled proportion whose true value is p."""
    p = min(1.0, max(0.0, p))
    return math.sqrt(p * (1.0 - p) / samples)


def compare(
    metric: str,
    subject: str,
    analytic: float,
    estimate: OracleEstimate,
    reference_std_error: float = 0.0,
    sigma: Optional[float] = None,
) -> OracleCheck:
    """
    Accept an analytic value iff it lies within sigma standard errors of the estimate.

    The standard error is the larger of the sampled one and a reference value
    derived from the analytic model, so tiny sample counts widen the window.
    """
    sigma = settings.ORACLE_SIGMA if sigma is None else sigma
    std_error = max(estimate.std_error, reference_std_error)
    tolerance = sigma * std_error
    return OracleCheck(
        metric=metric,
        subject=subject,
        analytic=analytic,
        estimate=estimate.value,
        std_error=std_error,
        tolerance=tolerance,
        passed=abs(analytic - estimate.value) <= tolerance + EXACT_TOLERANCE,
    )


def _metrics_job(args: Tuple[SvnContext, int, int, int]) -> Dict[str, OracleEstimate]:
    context, samples, seed, stream = args
    return sample_metrics(
        context.profiles, context.su_mean, context.channels_per_su, samples, seed, stream
    )


def _capacity_job(args: Tuple[Channel, int, int, int]) -> OracleEstimate:
    channel, samples, seed, stream = args
    return sample_mean_capacity(channel, samples, seed, stream)


def _occupancy_job(args: Tuple[Channel, float, int, int]) -> OracleEstimate:
    channel, horizon_s, seed, stream = args
    return simulate_channel_occupancy(channel, horizon_s=horizon_s, seed=seed, stream=stream)


def _mapped_channels(scenario: Scenario, mapping: Mapping) -> List[Channel]:
    used = {cid for ids in mapping.channel_sets(scenario).values() for cid in ids}
    return [c for c in scenario.channels if c.id in used]


def run_oracle_validation(
    scenario: Scenario,
    mapping: Mapping,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    corrupt_offset: float = 0.0,
    horizon_s: Optional[float] = None,
    workers: Optional[int] = None,
) -> ValidationReport:
    """
    Check every analytic quantity of a mapping against its oracle.

    Covers, per SVN, the collision, blocking, handover-attempt and handover
    probabilities; per mapped channel, the mean capacity and the CTMC busy
    fraction against ρ.

    Args:
        scenario: Validated scenario
        mapping: Disjoint mapping giving every SVN at least one channel
        samples: Samples per estimate (default ORACLE_SAMPLES)
        seed: Base seed (default DEFAULT_SEED)
        corrupt_offset: Added to every analytic probability; a nonzero value is a
            negative control that should make checks fail
        horizon_s: CTMC horizon (default CTMC_HORIZON_S)
        workers: Process count (default WORKERS)

    Returns:
        ValidationReport with one check per (metric, subject)

    Raises:
        OracleError: samples < 1
        MappingError / EmptyChannelSetError: Invalid mapping
    """
    samples = settings.ORACLE_SAMPLES if samples is None else samples
    seed = settings.DEFAULT_SEED if seed is None else seed
    horizon = settings.CTMC_HORIZON_S if horizon_s is None else horizon_s
    if samples < 1:
        raise OracleError("samples must be >= 1")

    contexts = mapping_contexts(scenario, mapping)
    report = evaluate_contexts(contexts)
    logger.info(
        f"Validating {len(contexts)} SVN(s) with {samples} samples per estimate (seed {seed})"
    )

    checks: List[OracleCheck] = []
    per_svn = map_ordered(
        _metrics_job, [(ctx, samples, seed, i) for i, ctx in enumerate(contexts)], workers
    )
    handover = sample_handover_chain(contexts, samples, seed)

    for metrics, estimates in zip(report.svns, per_svn):
        subject = metrics.svn_id
        for name, analytic in (
            ("collision", metrics.collision_prob),
            ("blocking", metrics.blocking_prob),
        ):
            claimed = analytic + corrupt_offset
            checks.append(
                compare(
                    name, subject, claimed, estimates[name], binomial_std_error(claimed, samples)
                )
            )

        attempt_se = binomial_std_error(metrics.handover_attempt_prob + corrupt_offset, samples)
        for name, analytic in (
            ("handover_attempt", metrics.handover_attempt_prob),
            ("handover", metrics.handover_prob),
        ):
            checks.append(
                compare(name, subject, analytic + corrupt_offset, handover[subject][name], attempt_se)
            )

    channels = _mapped_channels(scenario, mapping)
    checks.extend(_channel_checks(channels, samples, seed, horizon, workers))

    result = ValidationReport(checks=checks, samples=samples, seed=seed)
    if result.passed:
        logger.info(f"All {len(checks)} oracle checks passed")
    else:
        logger.warning(f"{len(result.failures())} of {len(checks)} oracle checks failed")
    return result


def _channel_checks(
    channels: Sequence[Channel],
    samples: int,
    seed: int,
    horizon_s: float,
    workers: Optional[int],
) -> List[OracleCheck]:
    capacities = map_ordered(
        _capacity_job, [(c, samples, seed, i) for i, c in enumerate(channels)], workers
    )
    occupancies = map_ordered(
        _occupancy_job, [(c, horizon_s, seed, i) for i, c in enumerate(channels)], workers
    )

    checks = []
    for channel, capacity, occupancy in zip(channels, capacities, occupancies):
        checks.append(
            compare(
                "mean_capacity",
                channel.id,
                mean_capacity(channel),
                capacity,
                capacity_std(channel) / math.sqrt(samples),
            )
        )
        checks.append(
            compare(
                "busy_fraction",
                channel.id,
                utilization(channel),
                occupancy,
                ctmc_standard_error(channel, horizon_s),
            )
        )
    return checks
