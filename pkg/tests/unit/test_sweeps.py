"""
Unit tests for parameter sweeps and the ordered job pool.
"""
import logging
import math

import pytest

from crvn.core.errors import SweepError
from crvn.schemas.sweep import SweepBase, SweepParameter, SweepSpec
from crvn.tasks.pool import map_ordered
from crvn.tasks.sweeps import preset_spec, run_sweep, sweep_base_from_scenario, sweep_point

TOL = 1e-12


def _nonincreasing(values) -> bool:
    return all(b <= a + TOL for a, b in zip(values, values[1:]))


def _nondecreasing(values) -> bool:
    return all(b >= a - TOL for a, b in zip(values, values[1:]))


def _column(result, name):
    return [getattr(row, name) for row in result.rows]


@pytest.mark.unit
class TestPresets:
    """Test suite for the named sweep presets."""

    def test_unknown_preset(self):
        """Test that an unknown preset name is refused."""
        with pytest.raises(SweepError):
            preset_spec("fig9")

    def test_utilization_preset_imposes_one_channel_per_su(self):
        """Test that the utilization preset fixes ChSU = 1."""
        spec = preset_spec("fig2")
        assert spec.parameter == SweepParameter.rho
        assert spec.base.imposed_channels_per_su == 1.0

    def test_utilization_trend(self):
        """Test that collision and blocking grow with ρ while the SU share shrinks."""
        # Act
        result = run_sweep(preset_spec("fig2"))

        # Assert
        assert len(result.rows) == 19
        assert not result.skipped
        assert _nondecreasing(_column(result, "collision"))
        assert _nondecreasing(_column(result, "blocking"))
        assert _nonincreasing(_column(result, "su_utilization"))

    def test_utilization_high_end(self):
        """Test that joint utilization approaches 1 + e^{-N̄SU}·ChSU/n near saturation."""
        row = sweep_point(SweepParameter.rho, preset_spec("fig2").base, 0.999999)
        assert row.utilization == pytest.approx(1.0 + math.exp(-1.0) / 4.0, abs=1e-4)
        assert row.su_utilization == pytest.approx(math.exp(-1.0) / 4.0, abs=1e-4)

    def test_channel_count_trend(self):
        """Test the trends in the number of channels allocated to the SVN."""
        # Act
        result = run_sweep(preset_spec("fig3"))

        # Assert
        assert _column(result, "value") == [float(n) for n in range(2, 21)]
        assert _nonincreasing(_column(result, "collision"))
        assert _nonincreasing(_column(result, "blocking"))

        large = [row for row in result.rows if row.value >= 10]
        utilization = [row.utilization for row in large]
        assert all(b < a for a, b in zip(utilization, utilization[1:]))
        assert _nonincreasing([row.handover_attempt for row in large])

    def test_blocking_trend(self):
        """Test that attempts and utilization fall as the imposed blocking rises."""
        # Act
        result = run_sweep(preset_spec("fig4"))

        # Assert
        attempt = _column(result, "handover_attempt")
        utilization = _column(result, "utilization")
        assert _nonincreasing(attempt)
        assert _nonincreasing(utilization)
        assert result.rows[-1].value == 1.0
        assert attempt[-1] == 0.0
        assert utilization[-1] == min(utilization)

    def test_blocking_column_is_imposed(self):
        """Test that the reported blocking equals the imposed value."""
        result = run_sweep(preset_spec("fig4"))
        assert [row.blocking for row in result.rows] == pytest.approx(_column(result, "value"))


@pytest.mark.unit
class TestSweepPoints:
    """Test suite for single points and custom sweeps."""

    def test_out_of_domain_points_are_skipped(self, caplog):
        """Test that ρ >= 1 points are skipped with a warning."""
        # Arrange
        spec = SweepSpec(parameter=SweepParameter.rho, start=0.5, stop=1.5, steps=3)

        # Act
        with caplog.at_level(logging.WARNING):
            result = run_sweep(spec)

        # Assert
        assert [row.value for row in result.rows] == [0.5]
        assert result.skipped == [1.0, 1.5]
        assert "Skipping rho=1" in caplog.text

    def test_fractional_channel_count(self):
        """Test that a non-integer channel count is refused."""
        with pytest.raises(SweepError):
            sweep_point(SweepParameter.channels, SweepBase(), 2.5)

    def test_invalid_range(self):
        """Test that a decreasing range is refused."""
        with pytest.raises(ValueError):
            SweepSpec(parameter=SweepParameter.rho, start=0.5, stop=0.1, steps=3)

    def test_without_neighbour(self):
        """Test that a lone swept SVN never hands over."""
        row = sweep_point(SweepParameter.rho, SweepBase(neighbour_channels=0), 0.5)
        assert row.handover == 0.0

    def test_parallel_sweep_keeps_order(self):
        """Test that two workers return the same rows as a serial run."""
        spec = preset_spec("fig4")
        assert run_sweep(spec, workers=2).rows == run_sweep(spec, workers=1).rows


@pytest.mark.unit
class TestSweepBaseFromScenario:
    """Test suite for deriving sweep parameters from a scenario."""

    def test_sample_scenario(self, scenario):
        """Test channel averages and the equal channel split."""
        # Act
        base = sweep_base_from_scenario(scenario)

        # Assert
        assert base.n_channels == 2
        assert base.neighbour_channels == 2
        assert base.rho == pytest.approx(0.25)
        assert base.su_arrival_rate == 0.5
        assert base.mean_demand_bps == 5e5

    def test_named_svn(self, scenario):
        """Test that a named SVN supplies the request parameters."""
        assert sweep_base_from_scenario(scenario, "s2").su_service_rate == 0.5

    def test_unknown_svn(self, scenario):
        """Test that an unknown SVN id is refused."""
        with pytest.raises(SweepError):
            sweep_base_from_scenario(scenario, "s9")


@pytest.mark.unit
class TestMapOrdered:
    """Test suite for the ordered job pool."""

    def test_serial(self):
        """Test results in input order with one worker."""
        assert map_ordered(abs, [-3, 1, -2], workers=1) == [3, 1, 2]

    def test_parallel(self):
        """Test results in input order with two worker processes."""
        assert map_ordered(abs, [-3, 1, -2, 5], workers=2) == [3, 1, 2, 5]

    def test_empty(self):
        """Test that no items give no results."""
        assert map_ordered(abs, [], workers=4) == []
