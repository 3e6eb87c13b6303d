"""Unit tests for sample paths, simulation and the finite-MDP oracle."""

import itertools
import math

import numpy as np
import pytest

from errors import ArgumentError, InadmissibleActionError
from lqc.mdp import LqcMdp
from mdp import (
    FiniteActionMdp,
    PathBatch,
    backward_induction,
    enumerate_noise_paths,
    estimate_lower_bound,
    exact_policy_value,
    exploring_paths,
    pathwise_values,
    simulate_paths,
    tail_values,
)
from policies.base import ConstantPolicy
from providers.noise import FiniteNoise


def _walk(noise: FiniteNoise) -> FiniteActionMdp:
    return FiniteActionMdp(
        horizon=2,
        initial_state=[0.0],
        actions=[0.0, 1.0],
        noise=noise,
        transition_fn=lambda n, x, a, z: x + a + z,
        reward_fn=lambda n, x, a: np.zeros(x.shape[0]),
        terminal_fn=lambda x: x[:, 0],
    )


def _expectimax(mdp, n: int, x: float) -> float:
    """Plain recursive solution of the grid fixture."""
    if n == mdp.horizon:
        return -2.0 * x**2 + x
    best = -math.inf
    for a in (-1.0, 0.0, 1.0):
        reward = -(x**2) - 0.5 * a**2 + 0.3 * x
        continuation = 0.4 * _expectimax(mdp, n + 1, x + a - 1.0) + 0.6 * _expectimax(
            mdp, n + 1, x + a + 1.0
        )
        best = max(best, reward + continuation)
    return best


class TestTailValues:
    """Test tail sums."""

    def test_recursion_exact(self):
        """V_n = r_n + V_{n+1} holds exactly."""
        rewards = np.array([[0.1, 0.2, 0.3, 1.7], [-1.0, 2.5, 1e-9, 3.0]])
        values = tail_values(rewards)
        np.testing.assert_array_equal(values[:, -1], rewards[:, -1])
        for n in range(3):
            np.testing.assert_array_equal(values[:, n], rewards[:, n] + values[:, n + 1])

    def test_single_period(self):
        """With N = 1 V_0 = r_0 + r_1."""
        np.testing.assert_array_equal(tail_values(np.array([2.0, 3.0])), [5.0, 3.0])

    def test_three_rewards(self):
        """Rewards (1, 2, 3) give tail values (6, 5, 3)."""
        np.testing.assert_array_equal(tail_values(np.array([1.0, 2.0, 3.0])), [6.0, 5.0, 3.0])


class TestSimulation:
    """Test path simulation and the lower bound."""

    def test_worker_count_irrelevant(self, scalar_lqc, scalar_lqc_solution):
        """Paths are bit-identical for 1 and 4 workers."""
        mdp = LqcMdp(scalar_lqc)
        policy = scalar_lqc_solution.policy()
        one = simulate_paths(mdp, policy, 300, seed=42, workers=1, chunk_size=64)
        four = simulate_paths(mdp, policy, 300, seed=42, workers=4, chunk_size=64)
        np.testing.assert_array_equal(one.states, four.states)
        np.testing.assert_array_equal(one.values, four.values)

    def test_chunk_size_irrelevant(self, scalar_lqc, scalar_lqc_solution):
        """Per-path substreams make the chunk layout invisible."""
        mdp = LqcMdp(scalar_lqc)
        policy = scalar_lqc_solution.policy()
        small = simulate_paths(mdp, policy, 100, seed=5, chunk_size=7)
        large = simulate_paths(mdp, policy, 100, seed=5, chunk_size=1000)
        np.testing.assert_array_equal(small.noises, large.noises)

    def test_cached_values_match_recomputation(self, scalar_lqc, scalar_lqc_solution):
        """Cached tail values equal a fresh recomputation from the trajectory."""
        mdp = LqcMdp(scalar_lqc)
        paths = simulate_paths(mdp, scalar_lqc_solution.policy(), 20, seed=1)
        for path in paths:
            np.testing.assert_allclose(pathwise_values(path, mdp), path.values, rtol=1e-12)

    def test_lower_bound_near_optimum(self, scalar_lqc, scalar_lqc_solution):
        """The optimal policy's lower bound covers V_0 within its interval."""
        mdp = LqcMdp(scalar_lqc)
        paths = simulate_paths(mdp, scalar_lqc_solution.policy(), 20_000, seed=9)
        estimate = estimate_lower_bound(paths)
        assert abs(estimate.mean - scalar_lqc_solution.initial_value()) <= 4.0 * estimate.std_error

    def test_count_must_be_positive(self, scalar_lqc, scalar_lqc_solution):
        """Zero paths is an argument error."""
        with pytest.raises(ArgumentError):
            simulate_paths(LqcMdp(scalar_lqc), scalar_lqc_solution.policy(), 0, seed=1)

    def test_inadmissible_policy(self, discrete_mdp):
        """Actions outside the table are rejected with the period."""
        with pytest.raises(InadmissibleActionError) as excinfo:
            simulate_paths(discrete_mdp, ConstantPolicy(0.5), 3, seed=1)
        assert excinfo.value.period == 0

    def test_single_atom_paths_identical(self):
        """With one noise atom every simulated path is the same."""
        mdp = _walk(FiniteNoise(atoms=np.array([0.5]), probabilities=np.array([1.0])))
        paths = simulate_paths(mdp, ConstantPolicy(1.0), 5, seed=3)
        np.testing.assert_array_equal(paths.states, np.broadcast_to(paths.states[0], paths.states.shape))
        np.testing.assert_array_equal(paths.states[0, :, 0], [0.0, 1.5, 3.0])

    def test_random_walk_centered(self):
        """A +-1 random walk keeps its start in mean."""
        walk = _walk(FiniteNoise.equiprobable([-1.0, 1.0]))
        paths = simulate_paths(walk, ConstantPolicy(0.0), 10_000, seed=8)
        end = paths.states[:, 2, 0]
        assert abs(end.mean()) <= 4.0 * end.std(ddof=1) / np.sqrt(end.shape[0])

    def test_empty_lower_bound(self):
        """An empty path set has no lower bound."""
        empty = PathBatch(
            states=np.zeros((0, 2, 1)),
            actions=np.zeros((0, 1, 1)),
            noises=np.zeros((0, 1, 1)),
            rewards=np.zeros((0, 2)),
            values=np.zeros((0, 2)),
        )
        with pytest.raises(ArgumentError):
            estimate_lower_bound(empty)


class TestFiniteOracle:
    """Test exact solutions of the finite grid model."""

    def test_backward_induction(self, discrete_mdp):
        """V*_0 matches a plain recursive expectimax."""
        solution = backward_induction(discrete_mdp)
        assert solution.initial_value == pytest.approx(_expectimax(discrete_mdp, 0, 0.5), abs=1e-12)

    def test_optimal_policy_value(self, discrete_mdp):
        """The optimal decisions achieve V*_0."""
        solution = backward_induction(discrete_mdp)
        assert exact_policy_value(discrete_mdp, solution.policy()) == pytest.approx(
            solution.initial_value, abs=1e-12
        )

    def test_suboptimal_policy_lower(self, discrete_mdp):
        """Any fixed action sequence is worth at most V*_0."""
        solution = backward_induction(discrete_mdp)
        for action in (-1.0, 0.0, 1.0):
            assert exact_policy_value(discrete_mdp, ConstantPolicy(action)) <= solution.initial_value + 1e-12

    def test_enumeration_weights(self, discrete_mdp):
        """Every noise path appears once with its probability."""
        paths = enumerate_noise_paths(discrete_mdp, ConstantPolicy(0.0))
        assert len(paths) == 4
        assert paths.weights is not None
        assert math.fsum(paths.weights) == pytest.approx(1.0)

    def test_exploring_paths_cover_cells(self, discrete_mdp):
        """Exploring paths visit every (action sequence, noise sequence) pair."""
        solution = backward_induction(discrete_mdp)
        paths = exploring_paths(discrete_mdp, solution)
        assert len(paths) == 9 * 4
        seen = {tuple(map(tuple, a)) for a in paths.actions[:, :, 0:1].tolist()}
        assert len(seen) == 9
        assert math.fsum(paths.weights) == pytest.approx(1.0)
        np.testing.assert_allclose(paths.values[:, 0], solution.initial_value)

    def test_action_sequences(self, discrete_mdp):
        """All 3^2 sequences are listed in lexicographic order."""
        sequences = discrete_mdp.action_sequences()
        expected = list(itertools.product([-1.0, 0.0, 1.0], repeat=2))
        assert [tuple(row[:, 0]) for row in sequences] == expected
