"""Analytic models: scenario split, channel capacity, occupancy laws and SVN metrics."""
