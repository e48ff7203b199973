"""Cognitive radio virtual network mapping: analytic metrics, SVN mapping and Monte Carlo oracles."""
__version__ = "0.1.0"
