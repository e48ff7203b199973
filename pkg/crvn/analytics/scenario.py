"""
Scenario ingestion and validation, and the PVN channel split.

Scenario and mapping files are JSON documents; every violated invariant is
reported at once as a per-field diagnostic.
"""
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

from pydantic import ValidationError

from crvn.core.errors import MappingError, ScenarioValidationError
from crvn.schemas.scenario import Channel, Mapping, PvnAllocation, PvnShare, Scenario


logger = logging.getLogger(__name__)


def _diagnostics(exc: ValidationError) -> List[str]:
    """Flatten a pydantic error into 'field.path: message' lines."""
    lines = []
    for error in exc.errors():
        loc = ".".join(str(part) for part in error["loc"]) or "<root>"
        lines.append(f"{loc}: {error['msg']}")
    return lines


def validate_scenario(scenario: Union[Scenario, Dict[str, Any]]) -> Scenario:
    """
    Validate a scenario document.

    Args:
        scenario: Raw mapping (parsed JSON) or an already constructed Scenario

    Returns:
        The validated, immutable Scenario

    Raises:
        ScenarioValidationError: With one diagnostic per violated invariant
    """
    raw = scenario.model_dump() if isinstance(scenario, Scenario) else scenario
    try:
        return Scenario.model_validate(raw)
    except ValidationError as e:
        diagnostics = _diagnostics(e)
        logger.error(f"Scenario rejected with {len(diagnostics)} problem(s)")
        raise ScenarioValidationError(diagnostics) from e


def _read_json(path: Union[str, Path]) -> Any:
    """Parse a JSON file, turning I/O and syntax problems into ValueError."""
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise ValueError(f"{path}: file not found") from e
    except json.JSONDecodeError as e:
        raise ValueError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from e


def load_scenario(path: Union[str, Path]) -> Scenario:
    """
    Load and validate a scenario file.

    Args:
        path: JSON scenario file

    Returns:
        Validated Scenario
    """
    try:
        raw = _read_json(path)
    except ValueError as e:
        raise ScenarioValidationError([str(e)]) from e

    scenario = validate_scenario(raw)
    logger.info(
        f"Loaded scenario {path}: {len(scenario.channels)} channels, "
        f"{len(scenario.pvn_shares)} PVNs, {len(scenario.svn_requests)} SVNs"
    )
    return scenario


def load_mapping(path: Union[str, Path], scenario: Scenario) -> Mapping:
    """
    Load a mapping file and check it against the scenario.

    Args:
        path: JSON file of the form {"assignments": {svn_id: [channel_id, ...]}}
        scenario: Scenario the mapping refers to

    Returns:
        Mapping whose ids all exist in the scenario
    """
    try:
        raw = _read_json(path)
    except ValueError as e:
        raise MappingError(str(e)) from e

    try:
        mapping = Mapping.model_validate(raw)
    except ValidationError as e:
        raise MappingError("; ".join(_diagnostics(e))) from e
    return validate_mapping(mapping, scenario)


def validate_mapping(mapping: Mapping, scenario: Scenario) -> Mapping:
    """
    Check that every SVN and channel id of a mapping exists in the scenario.

    Raises:
        MappingError: Listing the unknown ids
    """
    channel_ids = set(scenario.channel_index())
    svn_ids = set(scenario.request_index())

    problems = []
    for svn_id, assigned in mapping.assignments.items():
        if svn_id not in svn_ids:
            problems.append(f"unknown SVN id '{svn_id}'")
        for channel_id in assigned:
            if channel_id not in channel_ids:
                problems.append(f"SVN '{svn_id}' references unknown channel '{channel_id}'")

    if problems:
        raise MappingError("; ".join(problems))
    return mapping


def allocate_pvn_channels(
    channels: Sequence[Channel],
    shares: Sequence[PvnShare],
) -> PvnAllocation:
    """
    Split the substrate channels among PVNs by the largest-remainder rule.

    Every PVN starts at floor(M·q_j); the channels left over go to the PVNs with
    the largest fractional remainders, ties broken by input order. Channels are
    then handed out contiguously in input order.

    Args:
        channels: Ordered substrate channels
        shares: PVN shares summing to one

    Returns:
        PvnAllocation with |Q_j| in {floor(M·q_j), ceil(M·q_j)} and Σ|Q_j| = M

    Raises:
        ScenarioValidationError: If either list is empty
    """
    if not channels:
        raise ScenarioValidationError(["channels: channel list is empty"])
    if not shares:
        raise ScenarioValidationError(["pvn_shares: share list is empty"])

    m = len(channels)
    quotas = [m * s.share for s in shares]
    sizes = [math.floor(q) for q in quotas]
    leftover = m - sum(sizes)

    # Descending remainder, then input index.
    order = sorted(range(len(shares)), key=lambda j: (-(quotas[j] - sizes[j]), j))
    for j in order[:leftover]:
        sizes[j] += 1

    sets: Dict[str, tuple] = {}
    cursor = 0
    for share, size in zip(shares, sizes):
        sets[share.pvn_id] = tuple(c.id for c in channels[cursor:cursor + size])
        cursor += size

    return PvnAllocation(sets=sets)
