"""Unit tests for the analytic model, mappers, oracles and sweeps."""
