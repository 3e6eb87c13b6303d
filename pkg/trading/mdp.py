"""
Trading model as an MDP over periods n = t - 1.

The state at period n is (x_{t-1}, f_t); the action is the trade a_t; the
noise row n is z_{t+1}, which moves f_t to f_{t+1}. The period reward is the
trading reward at t and the terminal reward is 0.
"""

import numpy as np

from errors import InadmissibleActionError
from mdp.base import MdpModel
from trading.model import TradingModel

ADMISSIBILITY_TOLERANCE = 1e-9


class TradingMdp(MdpModel):
    """
    Constrained liquidation MDP: sell only, never short, flat at T.

    Attributes:
        model: Trading calibration
    """

    def __init__(self, model: TradingModel):
        super().__init__(
            model.horizon,
            model.num_securities + model.num_factors,
            model.num_securities,
            model.noise,
        )
        self.model = model
        self._decay = np.eye(model.num_factors) - model.Phi
        self._tolerance = ADMISSIBILITY_TOLERANCE * max(1.0, float(np.abs(model.x0).max()))

    def split(self, states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Positions (B, D) and factors (B, K) of a state batch."""
        D = self.model.num_securities
        return states[..., :D], states[..., D:]

    def initial_state(self) -> np.ndarray:
        return np.concatenate([self.model.x0, self.model.f1])

    def transition(
        self, n: int, states: np.ndarray, actions: np.ndarray, noises: np.ndarray
    ) -> np.ndarray:
        positions, factors = self.split(states)
        return np.concatenate([positions + actions, factors @ self._decay.T + noises], axis=-1)

    def reward(self, n: int, states: np.ndarray, actions: np.ndarray) -> np.ndarray:
        positions, factors = self.split(states)
        return self.model.reward(positions + actions, actions, factors)

    def terminal_reward(self, states: np.ndarray) -> np.ndarray:
        return np.zeros(states.shape[0])

    def check_admissible(self, n: int, states: np.ndarray, actions: np.ndarray) -> None:
        positions, _ = self.split(states)
        after = positions + actions
        tol = self._tolerance
        if np.any(actions > tol):
            raise InadmissibleActionError(
                f"buy order at period {n + 1}", period=n, constraint="sell_only"
            )
        if np.any(after < -tol):
            raise InadmissibleActionError(
                f"short position at period {n + 1}", period=n, constraint="no_short"
            )
        if n == self.horizon - 1 and np.any(np.abs(after) > tol):
            raise InadmissibleActionError(
                "position not liquidated at the final period",
                period=n,
                constraint="liquidation",
            )

    def factor_path(self, noises: np.ndarray) -> np.ndarray:
        """
        f_1..f_T along a noise path.

        Args:
            noises: (T, K) rows z_2..z_{T+1}; the last row is never used

        Returns:
            (T, K) array
        """
        T, K = self.model.horizon, self.model.num_factors
        factors = np.empty((T, K))
        factors[0] = self.model.f1
        for t in range(1, T):
            factors[t] = self._decay @ factors[t - 1] + noises[t - 1]
        return factors

    def inner_objective(self, noises: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
        """
        Negated total reward as 1/2 u'Pu + q'u + c0 with u = (a_1, ..., a_T).

        With x_t = x_0 + sum_{s<=t} a_s:
            P_{s,r} = Lambda 1[s=r] + gamma (T - max(s, r) + 1) Sigma
            q_s     = -B sum_{t>=s} f_t + gamma (T - s + 1) Sigma x_0
            c0      = -sum_t x_0'B f_t + gamma/2 T x_0'Sigma x_0
        """
        model = self.model
        T = model.horizon
        factors = self.factor_path(noises)
        tail = np.cumsum(factors[::-1], axis=0)[::-1]  # row s-1: sum_{t>=s} f_t

        P = np.kron(np.eye(T), model.Lambda)
        q = -(tail @ model.B.T).ravel()
        c0 = -float(np.sum(factors @ model.B.T @ model.x0))
        if model.gamma:
            periods = np.arange(1, T + 1)
            weight = T - np.maximum(periods[:, None], periods[None, :]) + 1
            P += model.gamma * np.kron(weight, model.Sigma)
            q += model.gamma * np.kron(T - periods + 1, model.Sigma @ model.x0)
            c0 += 0.5 * model.gamma * T * float(model.x0 @ model.Sigma @ model.x0)
        return P, q, c0

    def inner_constraints(
        self,
    ) -> tuple[np.ndarray | None, np.ndarray | None, np.ndarray | None, np.ndarray | None]:
        """
        a_t <= 0 for every t (DT rows), x_t >= 0 for t < T ((T-1)D rows) and
        x_T = 0 (D rows).

        x_T >= 0 follows from the equality and is not a row; the feasible set
        keeps a strict interior when x_0 > 0.
        """
        model = self.model
        T, D = model.horizon, model.num_securities
        cumulative = np.kron(np.tril(np.ones((T, T))), np.eye(D))  # rows: x_t - x_0
        G = np.vstack([np.eye(T * D), -cumulative[:-D]])
        h = np.concatenate([np.zeros(T * D), np.tile(model.x0, T - 1)])
        A_eq = cumulative[-D:]
        b_eq = -model.x0
        return G, h, A_eq, b_eq
