"""Simulated trajectories and their pathwise values."""

from dataclasses import dataclass

import numpy as np

from errors import ArgumentError


@dataclass(frozen=True, eq=False)
class SamplePath:
    """
    One simulated trajectory.

    Attributes:
        states: (N+1, state_dim) x_0..x_N
        actions: (N, action_dim) a_0..a_{N-1}
        noises: (N, noise_dim) z_1..z_N (row n holds z_{n+1})
        rewards: (N+1,) r_0..r_{N-1} followed by the terminal reward r_N
        values: (N+1,) tail values V_0..V_N
    """

    states: np.ndarray
    actions: np.ndarray
    noises: np.ndarray
    rewards: np.ndarray
    values: np.ndarray

    @property
    def horizon(self) -> int:
        return int(self.actions.shape[0])


def tail_values(rewards: np.ndarray) -> np.ndarray:
    """
    Tail sums V_n = sum_{k=n}^{N-1} r_k + r_N.

    Computed by the recursion V_N = r_N, V_n = r_n + V_{n+1}, so the identity
    holds exactly in floating point.

    Args:
        rewards: (..., N+1) rewards with the terminal reward last

    Returns:
        Array of the same shape
    """
    rewards = np.asarray(rewards, dtype=np.float64)
    values = np.empty_like(rewards)
    last = rewards.shape[-1] - 1
    values[..., last] = rewards[..., last]
    for n in range(last - 1, -1, -1):
        values[..., n] = rewards[..., n] + values[..., n + 1]
    return values


@dataclass(frozen=True, eq=False)
class PathBatch:
    """
    A set of M sample paths stored as stacked arrays.

    Attributes:
        states: (M, N+1, state_dim)
        actions: (M, N, action_dim)
        noises: (M, N, noise_dim)
        rewards: (M, N+1)
        values: (M, N+1) tail values, or continuation values supplied by an oracle
        weights: Optional (M,) probability weights (exact enumerations)
        seed: Master seed the paths were drawn with (None for enumerations)
    """

    states: np.ndarray
    actions: np.ndarray
    noises: np.ndarray
    rewards: np.ndarray
    values: np.ndarray
    weights: np.ndarray | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        count = self.states.shape[0]
        for name in ("actions", "noises", "rewards", "values"):
            if getattr(self, name).shape[0] != count:
                raise ArgumentError(f"{name} holds {getattr(self, name).shape[0]} paths, expected {count}")
        if self.weights is not None and self.weights.shape != (count,):
            raise ArgumentError("weights must have one entry per path")

    def __len__(self) -> int:
        return int(self.states.shape[0])

    @property
    def horizon(self) -> int:
        return int(self.actions.shape[1])

    def path(self, j: int) -> SamplePath:
        """Return path j as a SamplePath."""
        return SamplePath(
            states=self.states[j],
            actions=self.actions[j],
            noises=self.noises[j],
            rewards=self.rewards[j],
            values=self.values[j],
        )

    def __iter__(self):  # type: ignore[no-untyped-def]
        return (self.path(j) for j in range(len(self)))

    @classmethod
    def concatenate(cls, parts: list["PathBatch"]) -> "PathBatch":
        """Stack batches in order."""
        if not parts:
            raise ArgumentError("cannot concatenate an empty list of batches")
        weights = None
        if all(part.weights is not None for part in parts):
            weights = np.concatenate([part.weights for part in parts])  # type: ignore[misc]
        return cls(
            states=np.concatenate([part.states for part in parts]),
            actions=np.concatenate([part.actions for part in parts]),
            noises=np.concatenate([part.noises for part in parts]),
            rewards=np.concatenate([part.rewards for part in parts]),
            values=np.concatenate([part.values for part in parts]),
            weights=weights,
            seed=parts[0].seed,
        )
