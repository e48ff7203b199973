"""
Unit tests for scenario ingestion, mapping validation and the PVN channel split.
"""
import json

import pytest

from crvn.analytics.scenario import (
    allocate_pvn_channels,
    load_mapping,
    load_scenario,
    validate_mapping,
    validate_scenario,
)
from crvn.core.errors import MappingError, ScenarioValidationError
from crvn.schemas.scenario import Channel, Mapping, PvnShare


def _channels(count: int) -> list:
    return [
        Channel(id=f"c{i}", bandwidth_hz=1e6, pu_arrival_rate=0.1, pu_service_rate=1.0, snr_mean_db=10)
        for i in range(count)
    ]


def _shares(*values: float) -> list:
    return [PvnShare(pvn_id=f"p{j}", share=q) for j, q in enumerate(values)]


@pytest.mark.unit
class TestValidateScenario:
    """Test suite for scenario validation."""

    def test_valid_scenario(self, sample_scenario_data: dict):
        """Test that a well-formed scenario is accepted unchanged."""
        # Act
        scenario = validate_scenario(sample_scenario_data)

        # Assert
        assert len(scenario.channels) == 4
        assert [r.svn_id for r in scenario.svn_requests] == ["s1", "s2"]
        assert scenario.collision_threshold == 0.25

    def test_unstable_channel_rejected(self, sample_scenario_data: dict):
        """Test that a channel with λ = μ is rejected."""
        # Arrange
        sample_scenario_data["channels"][0].update(pu_arrival_rate=0.8, pu_service_rate=0.8)

        # Act / Assert
        with pytest.raises(ScenarioValidationError) as exc_info:
            validate_scenario(sample_scenario_data)
        assert any("utilization must be < 1" in d for d in exc_info.value.diagnostics)

    def test_zero_su_arrival_rate_rejected(self, sample_scenario_data: dict):
        """Test that a zero SU arrival rate is reported as not positive."""
        # Arrange
        sample_scenario_data["svn_requests"][0]["su_arrival_rate"] = 0

        # Act / Assert
        with pytest.raises(ScenarioValidationError) as exc_info:
            validate_scenario(sample_scenario_data)
        assert any("must be positive" in d for d in exc_info.value.diagnostics)

    def test_all_problems_reported_at_once(self, sample_scenario_data: dict):
        """Test that every violated invariant yields its own diagnostic."""
        # Arrange
        sample_scenario_data["svn_requests"][0]["su_arrival_rate"] = 0
        sample_scenario_data["channels"][1]["bandwidth_hz"] = -1
        sample_scenario_data["pvn_shares"][0]["share"] = 0.7

        # Act / Assert
        with pytest.raises(ScenarioValidationError) as exc_info:
            validate_scenario(sample_scenario_data)
        assert len(exc_info.value.diagnostics) >= 3

    def test_shares_must_sum_to_one(self, sample_scenario_data: dict):
        """Test that shares {0.5, 0.4} are rejected."""
        # Arrange
        sample_scenario_data["pvn_shares"][1]["share"] = 0.4

        # Act / Assert
        with pytest.raises(ScenarioValidationError):
            validate_scenario(sample_scenario_data)

    def test_duplicate_channel_ids_rejected(self, sample_scenario_data: dict):
        """Test that channel ids must be unique."""
        # Arrange
        sample_scenario_data["channels"][1]["id"] = "c1"

        # Act / Assert
        with pytest.raises(ScenarioValidationError) as exc_info:
            validate_scenario(sample_scenario_data)
        assert any("unique" in d for d in exc_info.value.diagnostics)

    def test_integer_ids_normalised(self, sample_scenario_data: dict):
        """Test that integer ids are accepted and stored as strings."""
        # Arrange
        for i, channel in enumerate(sample_scenario_data["channels"]):
            channel["id"] = i

        # Act
        scenario = validate_scenario(sample_scenario_data)

        # Assert
        assert [c.id for c in scenario.channels] == ["0", "1", "2", "3"]

    def test_zero_threshold_accepted(self, sample_scenario_data: dict):
        """Test that a zero collision threshold is a valid input."""
        # Arrange
        sample_scenario_data["collision_threshold"] = 0.0

        # Act
        scenario = validate_scenario(sample_scenario_data)

        # Assert
        assert scenario.collision_threshold == 0.0

    def test_unknown_field_rejected(self, sample_scenario_data: dict):
        """Test that unexpected keys are not silently ignored."""
        # Arrange
        sample_scenario_data["channels"][0]["colour"] = "blue"

        # Act / Assert
        with pytest.raises(ScenarioValidationError):
            validate_scenario(sample_scenario_data)


@pytest.mark.unit
class TestLoadFiles:
    """Test suite for scenario and mapping files."""

    def test_load_scenario(self, scenario_file):
        """Test loading a scenario from JSON."""
        # Act
        scenario = load_scenario(scenario_file)

        # Assert
        assert len(scenario.pvn_shares) == 2

    def test_load_scenario_invalid_json(self, tmp_path):
        """Test that malformed JSON surfaces as a validation error."""
        # Arrange
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")

        # Act / Assert
        with pytest.raises(ScenarioValidationError) as exc_info:
            load_scenario(path)
        assert "invalid JSON" in exc_info.value.diagnostics[0]

    def test_load_scenario_missing_file(self, tmp_path):
        """Test that a missing file is an input error."""
        with pytest.raises(ScenarioValidationError):
            load_scenario(tmp_path / "absent.json")

    def test_load_mapping(self, scenario, mapping_file):
        """Test loading a mapping against its scenario."""
        # Act
        mapping = load_mapping(mapping_file, scenario)

        # Assert
        assert mapping.assignments["s1"] == ("c1", "c2")

    def test_load_mapping_unknown_channel(self, scenario, write_json):
        """Test that a mapping referencing an unknown channel is rejected."""
        # Arrange
        path = write_json("bad.json", {"assignments": {"s1": ["c9"]}})

        # Act / Assert
        with pytest.raises(MappingError, match="unknown channel 'c9'"):
            load_mapping(path, scenario)

    def test_load_mapping_wrong_shape(self, scenario, tmp_path):
        """Test that a document without assignments of lists is rejected."""
        # Arrange
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"assignments": {"s1": 3.5}}), encoding="utf-8")

        # Act / Assert
        with pytest.raises(MappingError):
            load_mapping(path, scenario)


@pytest.mark.unit
class TestMapping:
    """Test suite for mapping helpers."""

    def test_unknown_svn(self, scenario):
        """Test that an unknown SVN id is reported."""
        with pytest.raises(MappingError, match="unknown SVN id 's9'"):
            validate_mapping(Mapping(assignments={"s9": ("c1",)}), scenario)

    def test_channel_sets_fill_missing_svns(self, scenario):
        """Test that SVNs absent from the mapping get the empty set."""
        # Arrange
        mapping = Mapping(assignments={"s2": ("c1",)})

        # Act
        sets = mapping.channel_sets(scenario)

        # Assert
        assert sets == {"s1": (), "s2": ("c1",)}

    def test_overlapping_channels(self):
        """Test that a channel claimed twice is listed with both owners."""
        # Arrange
        mapping = Mapping(assignments={"s1": ("c1", "c2"), "s2": ("c2",)})

        # Act
        overlaps = mapping.overlapping_channels()

        # Assert
        assert overlaps == {"c2": ("s1", "s2")}


@pytest.mark.unit
class TestAllocatePvnChannels:
    """Test suite for the largest-remainder PVN split."""

    def test_tie_goes_to_lower_index(self):
        """Test that M=5, q={0.5, 0.5} gives sizes {3, 2}."""
        # Act
        allocation = allocate_pvn_channels(_channels(5), _shares(0.5, 0.5))

        # Assert
        assert allocation.sizes() == {"p0": 3, "p1": 2}
        assert allocation.sets["p0"] == ("c0", "c1", "c2")
        assert allocation.sets["p1"] == ("c3", "c4")

    def test_exact_fractions(self):
        """Test that M=4, q={0.25, 0.25, 0.5} gives sizes {1, 1, 2}."""
        allocation = allocate_pvn_channels(_channels(4), _shares(0.25, 0.25, 0.5))
        assert allocation.sizes() == {"p0": 1, "p1": 1, "p2": 2}

    def test_single_pvn(self):
        """Test that a single PVN with share 1 receives every channel."""
        allocation = allocate_pvn_channels(_channels(3), _shares(1.0))
        assert allocation.sizes() == {"p0": 3}

    def test_sizes_bounded_and_complete(self):
        """Test that sizes lie in {floor, ceil} of M·q and cover all channels."""
        # Arrange
        channels = _channels(7)
        shares = _shares(0.2, 0.3, 0.5)

        # Act
        sizes = allocate_pvn_channels(channels, shares).sizes()

        # Assert
        assert sum(sizes.values()) == 7
        for share in shares:
            quota = 7 * share.share
            assert int(quota) <= sizes[share.pvn_id] <= int(quota) + 1

    def test_empty_inputs_rejected(self):
        """Test that empty channel or share lists are invalid."""
        with pytest.raises(ScenarioValidationError):
            allocate_pvn_channels([], _shares(1.0))
        with pytest.raises(ScenarioValidationError):
            allocate_pvn_channels(_channels(2), [])
