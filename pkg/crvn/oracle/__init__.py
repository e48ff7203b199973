"""
Independent Monte Carlo and enumeration oracles for the analytic model.
"""
from crvn.oracle.ctmc import ctmc_standard_error, simulate_channel_occupancy
from crvn.oracle.enumeration import brute_force_count_distribution
from crvn.oracle.sampler import sample_handover_chain, sample_mean_capacity, sample_metrics

__all__ = [
    "brute_force_count_distribution",
    "ctmc_standard_error",
    "sample_handover_chain",
    "sample_mean_capacity",
    "sample_metrics",
    "simulate_channel_occupancy",
]
