"""
Greedy construction plus first-improvement local search for larger instances.
"""
import logging
import math
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from crvn.analytics.metrics import su_demand
from crvn.core.config import settings
from crvn.mappers.base import UNASSIGNED, BaseMapper
from crvn.schemas.scenario import Scenario
from crvn.schemas.solution import CandidateSolution


logger = logging.getLogger(__name__)


class SearchKey(NamedTuple):
    """Ranking of a candidate: fewer violations, then smaller violation, then objective."""
    violations: int
    magnitude: float
    scalarized: float


def _search_key(candidate: CandidateSolution, requested: Dict[str, float]) -> SearchKey:
    magnitude = 0.0
    for check in candidate.violation_report:
        if check.constraint == "demand":
            # Deficit relative to the demand, so SVNs of different sizes compare.
            magnitude += -check.margin / requested[check.svn_id]
        else:
            magnitude += max(0.0, -check.margin)
    scalarized = math.inf if candidate.scalarized is None else candidate.scalarized
    return SearchKey(len(candidate.violation_report), magnitude, scalarized)


def _improves(new: SearchKey, current: SearchKey, tol: float) -> bool:
    if new.violations != current.violations:
        return new.violations < current.violations
    if abs(new.magnitude - current.magnitude) > tol:
        return new.magnitude < current.magnitude
    return new.scalarized < current.scalarized - tol


class HeuristicMapper(BaseMapper):
    """
    Scalable solver for the mapping problem.

    Channels are sorted by effective rate and handed round-robin to the SVNs
    that still need capacity; single-channel moves and pairwise swaps then
    improve the scalarized objective while keeping (or reaching) feasibility.
    """

    def __init__(
        self,
        scenario: Scenario,
        weights: Optional[Tuple[float, float, float]] = None,
        move_budget: Optional[int] = None,
    ):
        """
        Initialize the heuristic mapper.

        Args:
            scenario: Validated scenario
            weights: (w_h, w_b, w_u), nonnegative and not all zero
            move_budget: Maximum number of neighbour evaluations
        """
        super().__init__(scenario)
        self.weights = tuple(weights) if weights is not None else settings.DEFAULT_WEIGHTS
        if len(self.weights) != 3 or any(w < 0 for w in self.weights) or not any(self.weights):
            raise ValueError("weights must be three nonnegative values, not all zero")
        self.move_budget = move_budget or settings.MOVE_BUDGET
        self.tolerance = settings.DOMINANCE_TOLERANCE
        self.requested: Dict[str, float] = {
            request.svn_id: su_demand(request)[1] for request in self.evaluator.requests
        }

    def greedy_owners(self) -> List[int]:
        """Round-robin-by-need construction over channels sorted by effective rate."""
        evaluator = self.evaluator
        order = sorted(
            range(evaluator.n_channels),
            key=lambda i: (-evaluator.profiles[i].effective_rate_bps, i),
        )
        requested = [self.requested[r.svn_id] for r in evaluator.requests]
        allocated = [0.0] * evaluator.n_svns
        owners = [UNASSIGNED] * evaluator.n_channels

        turn = 0
        for channel_index in order:
            needy = [l for l in range(evaluator.n_svns) if allocated[l] < requested[l]]
            if not needy:
                break
            # Next SVN in round-robin order that still needs capacity.
            svn_index = min(needy, key=lambda l: (l - turn) % evaluator.n_svns)
            owners[channel_index] = svn_index + 1
            allocated[svn_index] += evaluator.profiles[channel_index].effective_rate_bps
            turn = (svn_index + 1) % evaluator.n_svns

        return owners

    def _neighbours(self, owners: Sequence[int]) -> Iterator[List[int]]:
        """Single-channel moves, then pairwise swaps, in a fixed order."""
        n_owners = self.evaluator.n_svns + 1
        for channel_index, owner in enumerate(owners):
            for target in range(n_owners):
                if target != owner:
                    moved = list(owners)
                    moved[channel_index] = target
                    yield moved
        for i in range(len(owners)):
            for j in range(i + 1, len(owners)):
                if owners[i] != owners[j]:
                    swapped = list(owners)
                    swapped[i], swapped[j] = owners[j], owners[i]
                    yield swapped

    def _evaluate(self, owners: Sequence[int]) -> CandidateSolution:
        return self.evaluator.evaluate(owners, weights=self.weights)

    def solve(self) -> CandidateSolution:
        """
        Build a greedy mapping and improve it by local search.

        Returns:
            The local optimum reached (or the best candidate when the move budget
            runs out); flagged infeasible if no feasible mapping was found
        """
        owners = self.greedy_owners()
        current = self._evaluate(owners)
        current_key = _search_key(current, self.requested)
        logger.info(
            f"Greedy start: feasible={current.feasible}, objective={current_key.scalarized:.6g}"
        )

        evaluations = 0
        improved = True
        while improved and evaluations < self.move_budget:
            improved = False
            for candidate_owners in self._neighbours(owners):
                if evaluations >= self.move_budget:
                    logger.warning(f"Move budget of {self.move_budget} exhausted")
                    break
                evaluations += 1
                candidate = self._evaluate(candidate_owners)
                key = _search_key(candidate, self.requested)
                if _improves(key, current_key, self.tolerance):
                    logger.debug(f"Move accepted after {evaluations} evaluations: {key}")
                    owners, current, current_key = candidate_owners, candidate, key
                    improved = True
                    break

        if not current.feasible:
            logger.warning(
                f"No feasible mapping found; returning best effort with "
                f"{len(current.violation_report)} violation(s)"
            )
        else:
            logger.info(f"Local optimum after {evaluations} evaluations: {current_key.scalarized:.6g}")
        return current


def heuristic_map(
    scenario: Scenario,
    weights: Optional[Tuple[float, float, float]] = None,
    move_budget: Optional[int] = None,
) -> CandidateSolution:
    """
    Greedy-plus-local-search solution of the mapping problem.

    Args:
        scenario: Validated scenario
        weights: Scalarization weights (w_h, w_b, w_u); default (1, 1, 1)
        move_budget: Maximum neighbour evaluations; default MOVE_BUDGET

    Returns:
        CandidateSolution, flagged infeasible when no feasible mapping was reached
    """
    return HeuristicMapper(scenario, weights=weights, move_budget=move_budget).solve()
