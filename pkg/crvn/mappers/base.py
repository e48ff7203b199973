"""
Base mapper with the shared evaluation machinery.

Provides cached per-SVN statistics, constraint checks and dominance for all
mapping solvers.
"""
import logging
import math
from abc import ABC, abstractmethod
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

from crvn.analytics.channel_model import channel_profile
from crvn.analytics.metrics import (
    SvnContext,
    allocated_rate,
    build_svn_context,
    evaluate_contexts,
    su_demand,
    svn_constraint_checks,
)
from crvn.analytics.scenario import validate_mapping
from crvn.core.config import settings
from crvn.schemas.metrics import ChannelProfile, ConstraintCheck, FeasibilityReport
from crvn.schemas.scenario import Mapping, Scenario
from crvn.schemas.solution import CandidateSolution, Objectives


logger = logging.getLogger(__name__)

# Owner value of a channel that no SVN uses.
UNASSIGNED = 0


def dominates(
    a: Objectives,
    b: Objectives,
    tolerance: Optional[float] = None,
) -> bool:
    """
    True iff ``a`` is no worse than ``b`` on every objective and strictly better
    on at least one. Handover and blocking are minimized, utilization maximized.

    Args:
        a: Candidate objectives
        b: Objectives compared against
        tolerance: Absolute tolerance below which differences are ties
    """
    tol = settings.DOMINANCE_TOLERANCE if tolerance is None else tolerance
    # Negate utilization so every component is minimized.
    xa = (a.mean_handover, a.mean_blocking, -a.mean_utilization)
    xb = (b.mean_handover, b.mean_blocking, -b.mean_utilization)

    no_worse = all(u <= v + tol for u, v in zip(xa, xb))
    strictly_better = any(u < v - tol for u, v in zip(xa, xb))
    return no_worse and strictly_better


def scalarize(objectives: Objectives, weights: Tuple[float, float, float]) -> float:
    """w_h·handover + w_b·blocking - w_u·utilization."""
    w_h, w_b, w_u = weights
    return (
        w_h * objectives.mean_handover
        + w_b * objectives.mean_blocking
        - w_u * objectives.mean_utilization
    )


class SvnStats(NamedTuple):
    """Cached per-SVN figures for one channel subset."""
    context: Optional[SvnContext]
    collision: float
    allocated: float
    requested: float


class MappingEvaluator:
    """
    Evaluates assignments of channels to SVNs.

    An assignment is an owner vector: one entry per substrate channel, either
    UNASSIGNED or 1 + the index of the owning SVN. Per-SVN statistics depend only
    on the SVN and its channel subset and are cached on that key.
    """

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.requests = list(scenario.svn_requests)
        self.channel_ids = [c.id for c in scenario.channels]
        self.profiles: List[ChannelProfile] = [channel_profile(c) for c in scenario.channels]
        self.threshold = scenario.collision_threshold
        self._stats: Dict[Tuple[int, Tuple[int, ...]], SvnStats] = {}

    @property
    def n_channels(self) -> int:
        return len(self.channel_ids)

    @property
    def n_svns(self) -> int:
        return len(self.requests)

    def svn_stats(self, svn_index: int, channel_indices: Sequence[int]) -> SvnStats:
        """Collision probability, allocated and requested rate of one SVN."""
        key = (svn_index, tuple(sorted(set(channel_indices))))
        cached = self._stats.get(key)
        if cached is not None:
            return cached

        request = self.requests[svn_index]
        _, requested = su_demand(request)
        profiles = [self.profiles[i] for i in key[1]]
        if profiles:
            context = build_svn_context(request, profiles)
            stats = SvnStats(context, context.collision_prob, allocated_rate(profiles), requested)
        else:
            # No channel means no PU to collide with and nothing allocated.
            stats = SvnStats(None, 0.0, 0.0, requested)

        self._stats[key] = stats
        return stats

    def sets_from_owners(self, owners: Sequence[int]) -> List[Tuple[int, ...]]:
        sets: List[List[int]] = [[] for _ in self.requests]
        for channel_index, owner in enumerate(owners):
            if owner != UNASSIGNED:
                sets[owner - 1].append(channel_index)
        return [tuple(s) for s in sets]

    def mapping_from_owners(self, owners: Sequence[int]) -> Mapping:
        sets = self.sets_from_owners(owners)
        return Mapping(
            assignments={
                request.svn_id: tuple(self.channel_ids[i] for i in channel_set)
                for request, channel_set in zip(self.requests, sets)
            }
        )

    def constraint_checks(self, sets: Sequence[Sequence[int]]) -> List[ConstraintCheck]:
        """Collision and demand checks of every SVN, in request order."""
        checks = []
        for svn_index, channel_set in enumerate(sets):
            svn_id = self.requests[svn_index].svn_id
            stats = self.svn_stats(svn_index, channel_set)
            checks.extend(
                svn_constraint_checks(
                    svn_id, stats.collision, stats.allocated, stats.requested, self.threshold
                )
            )
        return checks

    def objectives(self, sets: Sequence[Sequence[int]]) -> Optional[Objectives]:
        """Layer-average objectives, or None if some SVN has no channel."""
        contexts = []
        for svn_index, channel_set in enumerate(sets):
            context = self.svn_stats(svn_index, channel_set).context
            if context is None:
                return None
            contexts.append(context)

        layer = evaluate_contexts(contexts).layer
        return Objectives(
            mean_handover=layer.mean_handover,
            mean_blocking=layer.mean_blocking,
            mean_utilization=layer.mean_utilization,
        )

    def evaluate(
        self,
        owners: Sequence[int],
        weights: Optional[Tuple[float, float, float]] = None,
        objectives_if_infeasible: bool = True,
    ) -> CandidateSolution:
        """
        Evaluate one owner vector.

        Args:
            owners: Owner per channel
            weights: Scalarization weights; when given, the scalarized value is stored
            objectives_if_infeasible: Skip objective evaluation for infeasible candidates when False

        Returns:
            CandidateSolution with feasibility, violations and objectives
        """
        sets = self.sets_from_owners(owners)
        checks = self.constraint_checks(sets)
        feasible = all(c.satisfied for c in checks)

        objectives = None
        if feasible or objectives_if_infeasible:
            objectives = self.objectives(sets)

        scalarized = None
        if weights is not None:
            scalarized = math.inf if objectives is None else scalarize(objectives, weights)

        return CandidateSolution(
            mapping=self.mapping_from_owners(owners),
            objectives=objectives,
            feasible=feasible,
            violation_report=[c for c in checks if not c.satisfied],
            scalarized=scalarized,
        )


def check_constraints(mapping: Mapping, scenario: Scenario) -> FeasibilityReport:
    """
    Evaluate the collision, demand and disjointness constraints of a mapping.

    Args:
        mapping: Mapping to check (overlaps allowed; they are reported)
        scenario: Scenario the mapping refers to

    Returns:
        FeasibilityReport with margins thr - Pc and Ralloc - Bw_req per SVN

    Raises:
        MappingError: Unknown SVN or channel ids
    """
    validate_mapping(mapping, scenario)
    evaluator = MappingEvaluator(scenario)
    index = {cid: i for i, cid in enumerate(evaluator.channel_ids)}

    channel_sets = mapping.channel_sets(scenario)
    sets = [tuple(index[cid] for cid in dict.fromkeys(ids)) for ids in channel_sets.values()]
    checks = evaluator.constraint_checks(sets)

    overlaps = mapping.overlapping_channels()
    for svn_id, ids in channel_sets.items():
        shared = sum(1 for cid in set(ids) if cid in overlaps)
        checks.append(
            ConstraintCheck(
                svn_id=svn_id,
                constraint="disjoint",
                margin=float(-shared),
                satisfied=shared == 0,
            )
        )

    report = FeasibilityReport(checks=checks)
    if not report.feasible:
        logger.info(f"Mapping violates {len(report.violations())} constraint(s)")
    return report


class BaseMapper(ABC):
    """
    Base class for all SVN mapping solvers.

    Provides the cached evaluator and the settings every solver shares.
    """

    def __init__(self, scenario: Scenario):
        """
        Initialize the mapper.

        Args:
            scenario: Validated scenario holding the substrate and SVN requests
        """
        self.scenario = scenario
        self.evaluator = MappingEvaluator(scenario)

    @abstractmethod
    def solve(self, *args: Any, **kwargs: Any) -> Any:
        """
        Abstract method for the solving logic.

        Must be implemented by subclasses.
        """
        pass
