"""
Exhaustive Pareto enumeration for desk-scale instances.

Every channel is given one of N + 1 owners (no SVN, or one of the N SVNs); the
feasible assignments are filtered down to the exact non-dominated set.
"""
import itertools
import logging
from typing import List, Optional, Set, Tuple

from crvn.core.config import settings
from crvn.core.errors import BudgetExceededError
from crvn.mappers.base import UNASSIGNED, BaseMapper, dominates
from crvn.schemas.scenario import Scenario
from crvn.schemas.solution import CandidateSolution, ParetoFront


logger = logging.getLogger(__name__)


def pareto_filter(
    candidates: List[Tuple[Tuple[int, ...], CandidateSolution]],
) -> List[CandidateSolution]:
    """
    Reduce feasible candidates to their non-dominated subset.

    Candidates are visited in lexicographic objective order (ties by owner
    vector), so the returned order is deterministic.
    """
    ordered = sorted(candidates, key=lambda item: (item[1].objectives.sort_key(), item[0]))

    front: List[CandidateSolution] = []
    for _, candidate in ordered:
        if any(dominates(member.objectives, candidate.objectives) for member in front):
            continue
        front = [m for m in front if not dominates(candidate.objectives, m.objectives)]
        front.append(candidate)

    return sorted(front, key=lambda c: c.objectives.sort_key())


class ExhaustiveMapper(BaseMapper):
    """
    Exact solver: enumerates all (N + 1)^M assignments.

    Refuses instances whose assignment count exceeds the configured budget.
    """

    def __init__(self, scenario: Scenario, budget: Optional[int] = None):
        """
        Initialize the exhaustive mapper.

        Args:
            scenario: Validated scenario
            budget: Maximum number of assignments (default EXHAUSTIVE_BUDGET)
        """
        super().__init__(scenario)
        self.budget = budget or settings.EXHAUSTIVE_BUDGET

    @property
    def assignment_count(self) -> int:
        return (self.evaluator.n_svns + 1) ** self.evaluator.n_channels

    def solve(self) -> ParetoFront:
        """
        Enumerate every assignment and return the exact Pareto front.

        Raises:
            BudgetExceededError: If (N + 1)^M exceeds the budget
        """
        count = self.assignment_count
        if count > self.budget:
            raise BudgetExceededError(
                f"exhaustive enumeration needs {count} assignments, budget is {self.budget}; "
                f"use the heuristic mode instead"
            )

        n_svns = self.evaluator.n_svns
        logger.info(f"Enumerating {count} assignments over {self.evaluator.n_channels} channels")

        feasible: List[Tuple[Tuple[int, ...], CandidateSolution]] = []
        violated: Set[str] = set()
        for owners in itertools.product(range(n_svns + 1), repeat=self.evaluator.n_channels):
            # An SVN without channels cannot cover its (positive) demand.
            used = set(owners)
            used.discard(UNASSIGNED)
            if len(used) < n_svns:
                violated.add("demand")
                continue

            candidate = self.evaluator.evaluate(owners, objectives_if_infeasible=False)
            if candidate.feasible:
                feasible.append((owners, candidate))
            else:
                violated.update(c.constraint for c in candidate.violation_report)

        members = pareto_filter(feasible)
        logger.info(f"Pareto front: {len(members)} member(s) out of {len(feasible)} feasible")
        return ParetoFront(
            members=members,
            assignments_evaluated=count,
            feasible_count=len(feasible),
            violated_constraints=tuple(sorted(violated)),
        )


def enumerate_pareto(scenario: Scenario, budget: Optional[int] = None) -> ParetoFront:
    """
    Exact non-dominated set of feasible mappings.

    Args:
        scenario: Validated scenario
        budget: Maximum number of assignments to enumerate

    Returns:
        ParetoFront (empty when nothing is feasible)
    """
    return ExhaustiveMapper(scenario, budget=budget).solve()
