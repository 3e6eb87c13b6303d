"""Dense convex QP solver for the pathwise inner problems."""

from solvers.kkt import kkt_residuals
from solvers.problem import KktResiduals, QpProblem, QpSolution, QpStatus
from solvers.qp import check_convexity, solve_qp

__all__ = [
    "KktResiduals",
    "QpProblem",
    "QpSolution",
    "QpStatus",
    "check_convexity",
    "kkt_residuals",
    "solve_qp",
]
