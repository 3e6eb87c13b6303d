"""
Trading policies.

PLQC projects the unconstrained optimal trade onto the constraint set,
componentwise max(-x_{t-1}, min(0, alpha*_t)), and liquidates at T. TWAP
sells x_0 / T every period.
"""

import numpy as np

from lqc.problem import TradingSolution
from lqc.trading_recursion import unconstrained_policy
from trading.model import TradingModel


def plqc_policy(
    t: int, positions: np.ndarray, factors: np.ndarray, solution: TradingSolution
) -> np.ndarray:
    """Projected trade at period t for positions x_{t-1} (B, D) and factors f_t (B, K)."""
    positions = np.atleast_2d(positions)
    if t == solution.horizon:
        return -positions
    trade = unconstrained_policy(t, positions, factors, solution)
    return np.maximum(-positions, np.minimum(0.0, trade))


def twap_policy(t: int, positions: np.ndarray, model: TradingModel) -> np.ndarray:
    """Equal sales -x_0 / T, never below -x_{t-1}; the rest is sold at T."""
    positions = np.atleast_2d(positions)
    if t == model.horizon:
        return -positions
    return np.maximum(-model.x0 / model.horizon, -positions)


class PlqcPolicy:
    """PLQC policy on TradingMdp states (x_{t-1}, f_t)."""

    non_anticipative = True

    def __init__(self, model: TradingModel, solution: TradingSolution):
        self.model = model
        self.solution = solution

    def act(self, n: int, states: np.ndarray) -> np.ndarray:
        D = self.model.num_securities
        return plqc_policy(n + 1, states[:, :D], states[:, D:], self.solution)


class TwapPolicy:
    """TWAP policy on TradingMdp states."""

    non_anticipative = True

    def __init__(self, model: TradingModel):
        self.model = model

    def act(self, n: int, states: np.ndarray) -> np.ndarray:
        return twap_policy(n + 1, states[:, : self.model.num_securities], self.model)
