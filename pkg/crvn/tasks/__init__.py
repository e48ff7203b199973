"""Batch jobs: parameter sweeps and oracle validation runs."""
