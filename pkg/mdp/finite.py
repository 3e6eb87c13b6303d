"""
Finite-action MDPs with finite noise: an exact oracle.

For small models everything can be enumerated: the reachable state tree,
optimal values by backward induction, policy values, and the pathwise inner
problems of the dual (by trying every action sequence). The duality code
uses these models to verify regression-based penalties against exact answers.
"""

import itertools
import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from errors import ArgumentError, InadmissibleActionError
from mdp.base import MdpModel
from mdp.paths import PathBatch
from mdp.simulation import enumerate_noise_paths
from policies.base import Policy
from providers.noise.finite_discrete import FiniteNoise

logger = logging.getLogger(__name__)

StateKey = tuple[float, ...]
TransitionFn = Callable[[int, np.ndarray, np.ndarray, np.ndarray], np.ndarray]
RewardFn = Callable[[int, np.ndarray, np.ndarray], np.ndarray]
TerminalFn = Callable[[np.ndarray], np.ndarray]


def _key(state: np.ndarray) -> StateKey:
    return tuple(float(v) for v in np.asarray(state).ravel())


class FiniteActionMdp(MdpModel):
    """
    MDP with a finite action set and finite-discrete noise.

    Dynamics and rewards are supplied as batched callables.

    Attributes:
        actions: (num_actions, action_dim) admissible action table
    """

    def __init__(
        self,
        horizon: int,
        initial_state: np.ndarray | list[float],
        actions: np.ndarray | list[float],
        noise: FiniteNoise,
        transition_fn: TransitionFn,
        reward_fn: RewardFn,
        terminal_fn: TerminalFn,
    ):
        x0 = np.atleast_1d(np.asarray(initial_state, dtype=np.float64))
        table = np.asarray(actions, dtype=np.float64)
        if table.ndim == 1:
            table = table[:, None]
        if not isinstance(noise, FiniteNoise):
            raise ArgumentError("finite-action MDPs require finite-discrete noise")
        super().__init__(horizon, x0.shape[0], table.shape[1], noise)
        self.finite_noise = noise
        self._x0 = x0
        self.actions = table
        self._transition_fn = transition_fn
        self._reward_fn = reward_fn
        self._terminal_fn = terminal_fn

    def initial_state(self) -> np.ndarray:
        return self._x0.copy()

    def transition(
        self, n: int, states: np.ndarray, actions: np.ndarray, noises: np.ndarray
    ) -> np.ndarray:
        return np.asarray(self._transition_fn(n, states, actions, noises), dtype=np.float64)

    def reward(self, n: int, states: np.ndarray, actions: np.ndarray) -> np.ndarray:
        return np.asarray(self._reward_fn(n, states, actions), dtype=np.float64)

    def terminal_reward(self, states: np.ndarray) -> np.ndarray:
        return np.asarray(self._terminal_fn(states), dtype=np.float64)

    def check_admissible(self, n: int, states: np.ndarray, actions: np.ndarray) -> None:
        del states
        known = np.all(actions[:, None, :] == self.actions, axis=-1).any(axis=-1)
        if not np.all(known):
            bad = actions[~known][0]
            raise InadmissibleActionError(
                f"action {bad.tolist()} at period {n} is not in the action set",
                period=n,
                constraint="action_set",
            )

    def action_sequences(self) -> np.ndarray:
        """All action sequences as an (num_actions^N, N, action_dim) array."""
        index = np.array(
            list(itertools.product(range(self.actions.shape[0]), repeat=self.horizon)),
            dtype=np.intp,
        )
        return self.actions[index]


class TabularPolicy:
    """Decision rule stored as a state -> action table per period."""

    non_anticipative = True

    def __init__(self, decisions: list[dict[StateKey, np.ndarray]]):
        self.decisions = decisions

    def act(self, n: int, states: np.ndarray) -> np.ndarray:
        table = self.decisions[n]
        try:
            return np.stack([table[_key(row)] for row in states])
        except KeyError as e:
            raise ArgumentError(f"state {e.args[0]} at period {n} is not in the policy table") from e


@dataclass(frozen=True, eq=False)
class FiniteSolution:
    """
    Optimal values and decisions over the reachable state tree.

    Attributes:
        reachable: Reachable state keys per period 0..N
        values: V*_n per period as state -> value tables
        decisions: Optimal action per period 0..N-1
    """

    reachable: list[list[StateKey]]
    values: list[dict[StateKey, float]]
    decisions: list[dict[StateKey, np.ndarray]]

    @property
    def initial_value(self) -> float:
        return next(iter(self.values[0].values()))

    def value(self, n: int, states: np.ndarray) -> np.ndarray:
        """Look up V*_n on a batch of reachable states."""
        table = self.values[n]
        return np.array([table[_key(row)] for row in states])

    def policy(self) -> TabularPolicy:
        return TabularPolicy(self.decisions)

    def state_action_pairs(self, n: int, actions: np.ndarray) -> list[tuple[StateKey, StateKey]]:
        """Every (state, action) cell that can occur at period n."""
        return [(state, _key(action)) for state in self.reachable[n] for action in actions]


def reachable_states(mdp: FiniteActionMdp) -> list[list[StateKey]]:
    """Forward enumeration of states reachable under any actions and noise."""
    atoms = mdp.finite_noise.atoms
    layers: list[list[StateKey]] = [[_key(mdp.initial_state())]]
    for n in range(mdp.horizon):
        states = np.array(layers[n], dtype=np.float64)
        na, p = mdp.actions.shape[0], atoms.shape[0]
        s = np.repeat(states, na * p, axis=0)
        a = np.tile(np.repeat(mdp.actions, p, axis=0), (states.shape[0], 1))
        z = np.tile(atoms, (states.shape[0] * na, 1))
        successors = mdp.transition(n, s, a, z)
        layers.append(sorted({_key(row) for row in successors}))
    return layers


def backward_induction(mdp: FiniteActionMdp) -> FiniteSolution:
    """
    Solve the MDP exactly.

    V*_N = r_N and V*_n(x) = max_a [ r_n(x, a) + E V*_{n+1}(f(x, a, z)) ],
    ties broken by the first action in the table.
    """
    noise = mdp.finite_noise
    layers = reachable_states(mdp)
    horizon = mdp.horizon

    final = np.array(layers[horizon], dtype=np.float64)
    values: list[dict[StateKey, float]] = [{} for _ in range(horizon + 1)]
    values[horizon] = dict(zip(layers[horizon], mdp.terminal_reward(final).tolist(), strict=True))
    decisions: list[dict[StateKey, np.ndarray]] = [{} for _ in range(horizon)]

    for n in range(horizon - 1, -1, -1):
        for key in layers[n]:
            state = np.array(key)[None, :]
            best_value, best_action = -math.inf, mdp.actions[0]
            for action in mdp.actions:
                reward = float(mdp.reward(n, state, action[None, :])[0])
                successors = mdp.transition(
                    n,
                    np.repeat(state, noise.size, axis=0),
                    np.repeat(action[None, :], noise.size, axis=0),
                    noise.atoms,
                )
                continuation = math.fsum(
                    rho * values[n + 1][_key(row)]
                    for rho, row in zip(noise.probabilities, successors, strict=True)
                )
                candidate = reward + continuation
                if candidate > best_value:
                    best_value, best_action = candidate, action
            values[n][key] = best_value
            decisions[n][key] = best_action.copy()

    logger.debug(f"Backward induction: V*_0 = {values[0][layers[0][0]]:.6g}")
    return FiniteSolution(reachable=layers, values=values, decisions=decisions)


def exploring_paths(mdp: FiniteActionMdp, solution: FiniteSolution) -> PathBatch:
    """
    Enumerate every (action sequence, noise sequence) pair.

    Weights are the noise-path probability times a uniform weight over action
    sequences, so every reachable (state, action) cell is explored. Values are
    the optimal values V*_n(x_n), which makes coordinate fits reproduce the
    optimal penalty exactly.
    """
    noise = mdp.finite_noise
    action_paths = mdp.action_sequences()
    noise_paths, probabilities = zip(*noise.enumerate_paths(mdp.horizon), strict=True)

    actions = np.repeat(action_paths, len(noise_paths), axis=0)
    noises = np.tile(np.stack(noise_paths), (action_paths.shape[0], 1, 1))
    weights = np.tile(np.asarray(probabilities), action_paths.shape[0]) / action_paths.shape[0]

    states = mdp.rollout(actions, noises)
    horizon = mdp.horizon
    rewards = np.empty((actions.shape[0], horizon + 1))
    values = np.empty((actions.shape[0], horizon + 1))
    for n in range(horizon):
        rewards[:, n] = mdp.reward(n, states[:, n], actions[:, n])
        values[:, n] = solution.value(n, states[:, n])
    rewards[:, horizon] = mdp.terminal_reward(states[:, horizon])
    values[:, horizon] = solution.value(horizon, states[:, horizon])

    return PathBatch(
        states=states,
        actions=actions,
        noises=noises,
        rewards=rewards,
        values=values,
        weights=weights,
    )


def exact_policy_value(mdp: FiniteActionMdp, policy: Policy) -> float:
    """Expected total reward of a policy by enumeration of all noise paths."""
    paths = enumerate_noise_paths(mdp, policy)
    weights = np.ones(len(paths)) if paths.weights is None else paths.weights
    return math.fsum(weights * paths.values[:, 0])
