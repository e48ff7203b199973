"""
SVN mapping solvers.
"""
from crvn.mappers.base import BaseMapper, MappingEvaluator, check_constraints, dominates, scalarize
from crvn.mappers.exhaustive import ExhaustiveMapper, enumerate_pareto
from crvn.mappers.heuristic import HeuristicMapper, heuristic_map

__all__ = [
    "BaseMapper",
    "MappingEvaluator",
    "check_constraints",
    "dominates",
    "scalarize",
    "ExhaustiveMapper",
    "enumerate_pareto",
    "HeuristicMapper",
    "heuristic_map",
]
