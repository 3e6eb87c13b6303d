"""LQC problems as reward-maximizing MDPs with QP inner problems."""

import numpy as np

from lqc.problem import LqcProblem
from mdp.base import MdpModel


class LqcMdp(MdpModel):
    """
    MDP view of an LqcProblem: reward = -(x'Qx + a'Ra), terminal reward -x'Q_N x.

    Attributes:
        problem: The underlying LQC problem
    """

    def __init__(self, problem: LqcProblem):
        super().__init__(problem.horizon, problem.state_dim, problem.action_dim, problem.noise)
        self.problem = problem

    def initial_state(self) -> np.ndarray:
        return self.problem.initial_state.copy()

    def transition(
        self, n: int, states: np.ndarray, actions: np.ndarray, noises: np.ndarray
    ) -> np.ndarray:
        return states @ self.problem.A[n].T + actions @ self.problem.B[n].T + noises

    def reward(self, n: int, states: np.ndarray, actions: np.ndarray) -> np.ndarray:
        Q, R = self.problem.Q[n], self.problem.R[n]
        return -(
            np.einsum("bi,ij,bj->b", states, Q, states)
            + np.einsum("bi,ij,bj->b", actions, R, actions)
        )

    def terminal_reward(self, states: np.ndarray) -> np.ndarray:
        return -np.einsum("bi,ij,bj->b", states, self.problem.Q_terminal, states)

    def inner_objective(self, noises: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
        """
        Total cost along a fixed noise path as 1/2 u'Pu + q'u + c0.

        States are eliminated as x_n = c_n + S_n u with u the stacked actions.
        """
        problem = self.problem
        N, ds, da = problem.horizon, problem.state_dim, problem.action_dim
        size = N * da

        P = np.zeros((size, size))
        q = np.zeros(size)
        c0 = 0.0
        offset = problem.initial_state.copy()
        S = np.zeros((ds, size))

        for n in range(N + 1):
            Q = problem.Q_terminal if n == N else problem.Q[n]
            P += 2.0 * S.T @ Q @ S
            q += 2.0 * S.T @ Q @ offset
            c0 += float(offset @ Q @ offset)
            if n == N:
                break
            block = slice(n * da, (n + 1) * da)
            P[block, block] += 2.0 * problem.R[n]
            select = np.zeros((da, size))
            select[:, block] = np.eye(da)
            S = problem.A[n] @ S + problem.B[n] @ select
            offset = problem.A[n] @ offset + noises[n]

        return 0.5 * (P + P.T), q, c0

    def inner_constraints(
        self,
    ) -> tuple[np.ndarray | None, np.ndarray | None, np.ndarray | None, np.ndarray | None]:
        return None, None, None, None
