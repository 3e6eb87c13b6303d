"""Dual penalties, pathwise inner problems, upper bounds and duality gaps."""

from duality.feasibility import FeasibilityCheck, check_feasibility
from duality.inner import (
    InnerProblem,
    InnerSolution,
    build_inner_problem,
    inner_value,
    linearize_penalty,
    solve_inner_by_enumeration,
    solve_inner_problem,
)
from duality.penalties import Penalty, ZeroPenalty, penalty_evaluate
from duality.report import duality_gap
from duality.upper_bound import (
    UpperBoundResult,
    estimate_upper_bound,
    exact_upper_bound,
    upper_bound_noises,
)

__all__ = [
    "FeasibilityCheck",
    "InnerProblem",
    "InnerSolution",
    "Penalty",
    "UpperBoundResult",
    "ZeroPenalty",
    "build_inner_problem",
    "check_feasibility",
    "duality_gap",
    "estimate_upper_bound",
    "exact_upper_bound",
    "inner_value",
    "linearize_penalty",
    "penalty_evaluate",
    "solve_inner_by_enumeration",
    "solve_inner_problem",
    "upper_bound_noises",
]
