"""
Pytest configuration and shared fixtures.

This module provides fixtures that are shared across all tests including:
- Sample scenario and mapping documents
- Scenario and mapping files written to a temporary directory
- Channel profile factories
- A settings override helper
"""
import json
from pathlib import Path
from typing import Callable, Dict, List, Sequence

import pytest

from crvn.analytics.scenario import validate_scenario
from crvn.core.config import settings
from crvn.schemas.metrics import ChannelProfile
from crvn.schemas.scenario import Mapping, Scenario


# Sample data fixtures

@pytest.fixture
def sample_channel_data() -> dict:
    """
    Sample channel data for testing.

    Returns a dictionary with valid channel attributes.
    """
    return {
        "id": "c1",
        "bandwidth_hz": 1e6,
        "pu_arrival_rate": 0.3,
        "pu_service_rate": 1.0,
        "snr_mean_db": 10.0,
    }


@pytest.fixture
def sample_scenario_data() -> dict:
    """
    Four channels with utilizations 0.1 to 0.4, two PVNs and two SVNs.

    Each SVN requests one SU of 500 kbps on average, well below a single
    channel's effective rate.
    """
    return {
        "channels": [
            {
                "id": f"c{i}",
                "bandwidth_hz": 1e6,
                "pu_arrival_rate": 0.1 * i,
                "pu_service_rate": 1.0,
                "snr_mean_db": 10.0,
            }
            for i in range(1, 5)
        ],
        "pvn_shares": [
            {"pvn_id": "p1", "share": 0.5},
            {"pvn_id": "p2", "share": 0.5},
        ],
        "svn_requests": [
            {"svn_id": "s1", "su_arrival_rate": 0.5, "su_service_rate": 0.5, "mean_demand_bps": 5e5},
            {"svn_id": "s2", "su_arrival_rate": 0.5, "su_service_rate": 0.5, "mean_demand_bps": 5e5},
        ],
        "collision_threshold": 0.25,
    }


@pytest.fixture
def sample_mapping_data() -> dict:
    """Disjoint mapping of the sample scenario, two channels per SVN."""
    return {"assignments": {"s1": ["c1", "c2"], "s2": ["c3", "c4"]}}


@pytest.fixture
def scenario(sample_scenario_data: dict) -> Scenario:
    """Validated sample scenario."""
    return validate_scenario(sample_scenario_data)


@pytest.fixture
def mapping(sample_mapping_data: dict) -> Mapping:
    """Sample mapping model."""
    return Mapping.model_validate(sample_mapping_data)


@pytest.fixture
def scenario_file(tmp_path: Path, sample_scenario_data: dict) -> Path:
    """Sample scenario written as JSON."""
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(sample_scenario_data), encoding="utf-8")
    return path


@pytest.fixture
def mapping_file(tmp_path: Path, sample_mapping_data: dict) -> Path:
    """Sample mapping written as JSON."""
    path = tmp_path / "mapping.json"
    path.write_text(json.dumps(sample_mapping_data), encoding="utf-8")
    return path


@pytest.fixture
def write_json(tmp_path: Path) -> Callable[[str, dict], Path]:
    """Write an arbitrary document to a JSON file in the test directory."""

    def _write(name: str, document: dict) -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def make_profiles() -> Callable[..., List[ChannelProfile]]:
    """
    Build channel profiles from utilizations.

    Every channel gets the same mean capacity, so the effective rate is
    (1 - ρ) × capacity.
    """

    def _make(rhos: Sequence[float], capacity: float = 3e6, prefix: str = "c") -> List[ChannelProfile]:
        return [
            ChannelProfile(
                channel_id=f"{prefix}{i}",
                rho=rho,
                p_off=1.0 - rho,
                mean_capacity_bps=capacity,
                effective_rate_bps=(1.0 - rho) * capacity,
            )
            for i, rho in enumerate(rhos)
        ]

    return _make


@pytest.fixture
def override_settings(monkeypatch: pytest.MonkeyPatch) -> Callable[..., None]:
    """
    Temporarily override settings values for one test.

    Example:
        override_settings(ORACLE_BATCH_SIZE=1000)
    """

    def _override(**values: object) -> None:
        for name, value in values.items():
            monkeypatch.setattr(settings, name, value)

    return _override


@pytest.fixture
def scenario_factory() -> Callable[..., Scenario]:
    """Build small scenarios from per-channel utilizations and per-SVN demands."""

    def _build(
        rhos: Sequence[float],
        demands: Sequence[float],
        threshold: float = 0.5,
        su_mean: float = 1.0,
        snr_mean_db: float = 10.0,
    ) -> Scenario:
        document: Dict[str, object] = {
            "channels": [
                {
                    "id": f"c{i}",
                    "bandwidth_hz": 1e6,
                    "pu_arrival_rate": rho,
                    "pu_service_rate": 1.0,
                    "snr_mean_db": snr_mean_db,
                }
                for i, rho in enumerate(rhos)
            ],
            "pvn_shares": [{"pvn_id": "p1", "share": 1.0}],
            "svn_requests": [
                {
                    "svn_id": f"s{l}",
                    "su_arrival_rate": su_mean,
                    "su_service_rate": 1.0,
                    "mean_demand_bps": demand,
                }
                for l, demand in enumerate(demands)
            ],
            "collision_threshold": threshold,
        }
        return validate_scenario(document)

    return _build
