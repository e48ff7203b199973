"""
Test suite for the CR Virtual Network Mapper.

This package contains unit tests for the analytic model, mappers and oracles,
and integration tests for the command line.
"""
