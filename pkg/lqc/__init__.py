"""Closed-form linear-quadratic control: recursions, policies and exact penalties."""

from lqc.mdp import LqcMdp
from lqc.penalties import (
    LqcExactPenalty,
    TradingValuePenalty,
    lqc_exact_penalty,
    lqc_penalty_model,
    lqc_taylor_penalty,
    taylor_penalty,
)
from lqc.problem import LqcProblem, LqcSolution, TradingSolution, noise_covariance
from lqc.riccati import solve_riccati
from lqc.trading_recursion import trading_value_recursion, unconstrained_policy

__all__ = [
    "LqcExactPenalty",
    "LqcMdp",
    "LqcProblem",
    "LqcSolution",
    "TradingSolution",
    "TradingValuePenalty",
    "lqc_exact_penalty",
    "lqc_penalty_model",
    "lqc_taylor_penalty",
    "noise_covariance",
    "solve_riccati",
    "taylor_penalty",
    "trading_value_recursion",
    "unconstrained_policy",
]
