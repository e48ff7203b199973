"""
Pydantic schemas for mapping-problem solutions and Pareto fronts.
"""
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from crvn.schemas.metrics import ConstraintCheck
from crvn.schemas.scenario import Mapping


class Objectives(BaseModel):
    """Layer-average objective vector: minimize handover and blocking, maximize utilization."""
    mean_handover: float
    mean_blocking: float
    mean_utilization: float

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.mean_handover, self.mean_blocking, self.mean_utilization)

    def sort_key(self) -> Tuple[float, float, float]:
        """Lexicographic order with utilization negated."""
        return (self.mean_handover, self.mean_blocking, -self.mean_utilization)

    model_config = ConfigDict(frozen=True)


class CandidateSolution(BaseModel):
    """
    A mapping with its objective vector and feasibility report.

    ``objectives`` is None when some SVN received no channel, since the layer
    averages are then undefined.
    """
    mapping: Mapping
    objectives: Optional[Objectives] = None
    feasible: bool
    violation_report: List[ConstraintCheck] = Field(default_factory=list)
    scalarized: Optional[float] = None

    model_config = ConfigDict(frozen=True)


class ParetoFront(BaseModel):
    """
    Feasible, pairwise non-dominated solutions in lexicographic objective order.

    ``violated_constraints`` lists the constraint kinds that ruled out the
    infeasible assignments, sorted by name.
    """
    members: List[CandidateSolution] = Field(default_factory=list)
    assignments_evaluated: int = 0
    feasible_count: int = 0
    violated_constraints: Tuple[str, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.members

    def __len__(self) -> int:
        return len(self.members)

    model_config = ConfigDict(frozen=True)
