"""
Finite-horizon MDP abstraction.

x_{n+1} = f(x_n, a_n, z_{n+1}),  n = 0..N-1
with per-period rewards r_n(x_n, a_n) and terminal reward r_N(x_N).

All maps are evaluated on batches: states (B, state_dim), actions
(B, action_dim), noises (B, noise_dim). Implementations must be deterministic
given their inputs.
"""

from abc import ABC, abstractmethod
from typing import Protocol, runtime_checkable

import numpy as np

from errors import ArgumentError
from providers.noise.base import NoiseModel


class MdpModel(ABC):
    """
    Base class of finite-horizon MDPs.

    Attributes:
        horizon: Number of decision periods N (>= 1)
        state_dim: State dimension
        action_dim: Action dimension
        noise: Noise model of z_{n+1}
    """

    def __init__(self, horizon: int, state_dim: int, action_dim: int, noise: NoiseModel):
        if horizon < 1:
            raise ArgumentError(f"horizon must be >= 1, got {horizon}")
        self.horizon = horizon
        self.state_dim = state_dim
        self.action_dim = action_dim
        self.noise = noise

    @abstractmethod
    def initial_state(self) -> np.ndarray:
        """Return x_0 as a (state_dim,) array."""

    @abstractmethod
    def transition(
        self, n: int, states: np.ndarray, actions: np.ndarray, noises: np.ndarray
    ) -> np.ndarray:
        """Return x_{n+1} for a batch."""

    @abstractmethod
    def reward(self, n: int, states: np.ndarray, actions: np.ndarray) -> np.ndarray:
        """Return r_n(x_n, a_n) as a (B,) array."""

    @abstractmethod
    def terminal_reward(self, states: np.ndarray) -> np.ndarray:
        """Return r_N(x_N) as a (B,) array."""

    def check_admissible(self, n: int, states: np.ndarray, actions: np.ndarray) -> None:
        """
        Verify that actions are admissible at period n.

        Raises:
            InadmissibleActionError: Naming the period and violated constraint
        """
        del n, states, actions

    def rollout(self, actions: np.ndarray, noises: np.ndarray) -> np.ndarray:
        """
        Replay action sequences from x_0 under fixed noise.

        Args:
            actions: (B, N, action_dim)
            noises: (B, N, noise_dim) or (N, noise_dim) shared by all rows

        Returns:
            (B, N+1, state_dim) states
        """
        batch = actions.shape[0]
        if noises.ndim == 2:
            noises = np.broadcast_to(noises, (batch, *noises.shape))
        states = np.empty((batch, self.horizon + 1, self.state_dim))
        states[:, 0] = self.initial_state()
        for n in range(self.horizon):
            states[:, n + 1] = self.transition(n, states[:, n], actions[:, n], noises[:, n])
        return states

    def total_reward(self, states: np.ndarray, actions: np.ndarray) -> np.ndarray:
        """Sum of all rewards along a batch of trajectories."""
        total = self.terminal_reward(states[:, self.horizon])
        for n in range(self.horizon):
            total = total + self.reward(n, states[:, n], actions[:, n])
        return np.asarray(total)


@runtime_checkable
class QuadraticInnerModel(Protocol):
    """
    Models whose pathwise inner problems are convex QPs.

    With the action sequences stacked into u (length N * action_dim) and the
    noise path fixed, the negated total reward must be the quadratic
    1/2 u'Pu + q'u + c0 and the admissible set a polyhedron.
    """

    def inner_objective(self, noises: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
        """Return (P, q, c0) of -sum(rewards) for an (N, noise_dim) noise path."""
        ...

    def inner_constraints(
        self,
    ) -> tuple[np.ndarray | None, np.ndarray | None, np.ndarray | None, np.ndarray | None]:
        """Return (G, h, A_eq, b_eq); None entries mean no such constraints."""
        ...
