"""
Dual penalty interface.

A penalty maps trajectories (states, actions, noises) to one number per
trajectory. Feasible penalties have zero mean under every non-anticipative
policy. The control variate is the part of the penalty that does not depend
on actions: it shifts no inner optimizer, so inner problems drop it from the
optimization and add it back to the reported value.
"""

from typing import Protocol, runtime_checkable

import numpy as np

from regression.penalty_model import PenaltyModel


@runtime_checkable
class Penalty(Protocol):
    """
    Protocol for dual penalties (reward convention: subtracted from the reward).

    Attributes:
        affine_in_action: True when the penalty is affine in the action sequence
    """

    @property
    def affine_in_action(self) -> bool: ...

    def evaluate(self, states: np.ndarray, actions: np.ndarray, noises: np.ndarray) -> np.ndarray:
        """
        Args:
            states: (B, N+1, state_dim)
            actions: (B, N, action_dim)
            noises: (B, N, noise_dim)

        Returns:
            (B,) penalty values
        """
        ...

    def control_variate(
        self, states: np.ndarray, actions: np.ndarray, noises: np.ndarray
    ) -> np.ndarray:
        """Action-independent part of evaluate, shape (B,)."""
        ...


class ZeroPenalty:
    """M = 0: perfect foresight without penalization."""

    affine_in_action = True

    def evaluate(self, states: np.ndarray, actions: np.ndarray, noises: np.ndarray) -> np.ndarray:
        return np.zeros(states.shape[0])

    def control_variate(
        self, states: np.ndarray, actions: np.ndarray, noises: np.ndarray
    ) -> np.ndarray:
        return np.zeros(states.shape[0])


def penalty_evaluate(
    pm: PenaltyModel, states: np.ndarray, actions: np.ndarray, noises: np.ndarray
) -> np.ndarray | float:
    """
    sum_n sum_i beta_{n,i}(x_n, a_n) b_i(z_{n+1}) for one trajectory or a batch.

    A single trajectory (states (N+1, ds)) returns a float.
    """
    states = np.asarray(states, dtype=np.float64)
    if states.ndim == 2:
        value = pm.evaluate(states[None], np.asarray(actions)[None], np.asarray(noises)[None])
        return float(value[0])
    return pm.evaluate(states, actions, noises)
