"""
Policy interface and generic decision rules.

A policy is a sequence of decision rules alpha_n evaluated on a batch of
period-n states. Policies are pure: same (n, states) in, same actions out.
"""

from typing import Protocol

import numpy as np

from errors import ArgumentError


class Policy(Protocol):
    """
    Protocol for batched decision rules.

    Attributes:
        non_anticipative: True when alpha_n only reads period-n inputs
    """

    @property
    def non_anticipative(self) -> bool: ...

    def act(self, n: int, states: np.ndarray) -> np.ndarray:
        """
        Evaluate alpha_n on a batch of states.

        Args:
            n: Period index 0..N-1
            states: (B, state_dim) period-n states

        Returns:
            (B, action_dim) actions
        """
        ...


class ConstantPolicy:
    """Take the same action in every period and state."""

    non_anticipative = True

    def __init__(self, action: np.ndarray | list[float] | float):
        self.action = np.atleast_1d(np.asarray(action, dtype=np.float64))

    def act(self, n: int, states: np.ndarray) -> np.ndarray:  # noqa: ARG002
        return np.broadcast_to(self.action, (states.shape[0], self.action.shape[0])).copy()


class LinearFeedbackPolicy:
    """
    Time-varying linear feedback a_n = L_n x_n.

    Attributes:
        gains: (N, action_dim, state_dim) gain matrices
    """

    non_anticipative = True

    def __init__(self, gains: np.ndarray):
        gains = np.asarray(gains, dtype=np.float64)
        if gains.ndim != 3:
            raise ArgumentError(f"gains must be (N, action_dim, state_dim), got {gains.shape}")
        self.gains = gains

    def act(self, n: int, states: np.ndarray) -> np.ndarray:
        return states @ self.gains[n].T
