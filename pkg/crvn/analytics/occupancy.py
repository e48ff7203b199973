"""
Occupancy laws: Poisson-binomial PU and idle-channel counts over heterogeneous
channels, and the Poisson SU count.
"""
import math
from typing import Sequence

import numpy as np
from scipy.special import gammaln, xlogy

from crvn.schemas.metrics import CountDistribution


def _validate_rhos(rhos: Sequence[float]) -> None:
    for rho in rhos:
        if not 0.0 <= rho < 1.0:
            raise ValueError(f"utilization must lie in [0, 1), got {rho}")


def _poisson_binomial_pmf(rhos: Sequence[float]) -> np.ndarray:
    # Insert one Bernoulli(ρ_i) at a time into the running pmf.
    pmf = np.array([1.0])
    for rho in rhos:
        nxt = np.zeros(len(pmf) + 1)
        nxt[:-1] = pmf * (1.0 - rho)
        nxt[1:] += pmf * rho
        pmf = nxt
    return pmf


def pu_count_distribution(rhos: Sequence[float]) -> CountDistribution:
    """
    Distribution of the number of PU-busy channels.

    Args:
        rhos: Per-channel busy probabilities in [0, 1)

    Returns:
        pmf[k] = P[exactly k channels busy]; the empty set gives {1.0}
    """
    _validate_rhos(rhos)
    return CountDistribution(pmf=tuple(float(p) for p in _poisson_binomial_pmf(rhos)))


def idle_count_distribution(rhos: Sequence[float]) -> CountDistribution:
    """Distribution of the number of PU-free channels (reversed PU-count pmf)."""
    _validate_rhos(rhos)
    return CountDistribution(pmf=tuple(float(p) for p in _poisson_binomial_pmf(rhos)[::-1]))


def expected_idle_channels(rhos: Sequence[float]) -> float:
    """Mean number of idle channels, taken from the idle-count pmf."""
    return idle_count_distribution(rhos).mean()


def su_count_pmf(mean: float, k: int) -> float:
    """
    Poisson pmf mean^k e^{-mean} / k!, evaluated in log space.

    Args:
        mean: Poisson mean (>= 0)
        k: Count (>= 0)
    """
    if mean < 0 or k < 0:
        raise ValueError("mean and k must be nonnegative")
    return float(np.exp(xlogy(k, mean) - mean - gammaln(k + 1)))


def su_count_exceeds(mean: float, threshold: int) -> float:
    """
    P[NSU > threshold] for NSU ~ Poisson(mean), by direct summation of the head.

    A threshold of -1 gives 1.
    """
    if threshold < -1:
        raise ValueError("threshold must be >= -1")
    if threshold == -1:
        return 1.0
    ks = np.arange(threshold + 1)
    head = math.fsum(np.exp(xlogy(ks, mean) - mean - gammaln(ks + 1)))
    return min(1.0, max(0.0, 1.0 - head))
