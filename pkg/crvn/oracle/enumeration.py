"""
Literal subset enumeration of the PU-count and idle-count laws.

Exponential in the number of channels; kept only as the witness that the
convolution in crvn.analytics.occupancy is exact.
"""
import itertools
import math
from typing import Literal, Sequence

from crvn.core.errors import OracleError
from crvn.schemas.metrics import CountDistribution


MAX_ENUMERATION_CHANNELS = 20

CountKind = Literal["PU", "OFF"]


def _subset_probability(rhos: Sequence[float], chosen: Sequence[int], kind: CountKind) -> float:
    members = set(chosen)
    if kind == "PU":
        # Chosen channels busy, the rest idle.
        factors = (rho if i in members else 1.0 - rho for i, rho in enumerate(rhos))
    else:
        factors = (1.0 - rho if i in members else rho for i, rho in enumerate(rhos))
    return math.prod(factors)


def brute_force_count_distribution(rhos: Sequence[float], which: CountKind) -> CountDistribution:
    """
    Count distribution by summing over every channel subset of each size.

    Args:
        rhos: Per-channel busy probabilities
        which: "PU" for the busy count, "OFF" for the idle count

    Returns:
        pmf[k] = Σ over k-subsets of the probability that exactly that subset
        is busy ("PU") or idle ("OFF")

    Raises:
        OracleError: More than MAX_ENUMERATION_CHANNELS channels, or unknown kind
    """
    if which not in ("PU", "OFF"):
        raise OracleError(f"unknown count kind '{which}', expected PU or OFF")
    if len(rhos) > MAX_ENUMERATION_CHANNELS:
        raise OracleError(
            f"brute-force enumeration supports at most {MAX_ENUMERATION_CHANNELS} channels, "
            f"got {len(rhos)}"
        )

    n = len(rhos)
    pmf = [
        math.fsum(
            _subset_probability(rhos, chosen, which)
            for chosen in itertools.combinations(range(n), k)
        )
        for k in range(n + 1)
    ]
    return CountDistribution(pmf=tuple(pmf))
