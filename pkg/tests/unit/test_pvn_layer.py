"""
Unit tests for the primary-layer PVN summaries.
"""
import math

import pytest

from crvn.analytics.pvn_layer import pvn_layer_report
from crvn.analytics.scenario import validate_scenario


@pytest.mark.unit
class TestPvnLayerReport:
    """Test suite for pvn_layer_report."""

    def test_split_and_idle_channels(self, scenario):
        """Test that each PVN gets two channels and Σ(1 - ρ) idle channels."""
        # Act
        summaries = pvn_layer_report(scenario)

        # Assert
        assert [s.pvn_id for s in summaries] == ["p1", "p2"]
        assert summaries[0].channel_ids == ("c1", "c2")
        assert summaries[1].channel_ids == ("c3", "c4")
        assert summaries[0].expected_idle_channels == pytest.approx(0.9 + 0.8)
        assert summaries[1].expected_idle_channels == pytest.approx(0.7 + 0.6)

    def test_distributions_are_reversed(self, scenario):
        """Test that the idle-count law is the reversed PU-count law."""
        for summary in pvn_layer_report(scenario):
            assert summary.idle_distribution.pmf == tuple(reversed(summary.pu_distribution.pmf))
            assert math.fsum(summary.idle_distribution.pmf) == pytest.approx(1.0)

    def test_pvn_without_channels(self, sample_scenario_data):
        """Test that a zero share yields no channels and a point mass at zero."""
        # Arrange
        sample_scenario_data["pvn_shares"] = [
            {"pvn_id": "p1", "share": 1.0},
            {"pvn_id": "p2", "share": 0.0},
        ]
        scenario = validate_scenario(sample_scenario_data)

        # Act
        summaries = pvn_layer_report(scenario)

        # Assert
        empty = summaries[1]
        assert empty.channel_ids == ()
        assert empty.expected_idle_channels == 0.0
        assert empty.idle_distribution.pmf == (1.0,)
        assert empty.effective_rate_bps == 0.0

    def test_effective_rate_sums_channels(self, scenario):
        """Test that the offered rate is positive and additive over the PVN's channels."""
        summaries = pvn_layer_report(scenario)
        assert all(s.effective_rate_bps > 0 for s in summaries)
        # Lower utilizations in p1 leave more room for secondary users.
        assert summaries[0].effective_rate_bps > summaries[1].effective_rate_bps
