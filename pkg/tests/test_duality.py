"""
Tests for dual penalties, inner problems, upper bounds and duality gaps.

Tests cover:
1. Penalty evaluation and feasibility checks
2. Pathwise strong duality with optimal penalties (LQC and enumeration oracle)
3. Upper-bound estimation and its error paths
4. The split between first- and second-order trading penalties
5. Duality gap reporting
"""

import math

import numpy as np
import pytest

from basis.spec import BasisSpec
from duality import (
    ZeroPenalty,
    build_inner_problem,
    check_feasibility,
    duality_gap,
    estimate_upper_bound,
    exact_upper_bound,
    inner_value,
    linearize_penalty,
    penalty_evaluate,
    upper_bound_noises,
)
from errors import AnticipativePolicyError, ArgumentError, NonAffinePenaltyError
from infrastructure.streams import Stream
from lqc import LqcExactPenalty, LqcMdp, trading_value_recursion
from mdp import FiniteActionMdp, backward_induction, exploring_paths, simulate_paths
from models.bounds import BoundEstimate, PenaltyKind
from policies.base import ConstantPolicy
from policies.trading import PlqcPolicy
from providers.noise import FiniteNoise
from regression import PenaltyModel, fit_coordinates, intercept_regressors, tabular_regressors
from solvers import QpStatus
from trading import TradingMdp, build_model
from workflows.experiment import build_penalty


class SquaredNoisePenalty:
    """Sum of z^2 over periods: not centered, so infeasible."""

    affine_in_action = True

    def evaluate(self, states, actions, noises):
        return np.sum(noises**2, axis=(1, 2))

    def control_variate(self, states, actions, noises):
        return self.evaluate(states, actions, noises)


class SquaredActionPenalty:
    """Claims affinity but is quadratic in the actions."""

    affine_in_action = True

    def evaluate(self, states, actions, noises):
        return np.sum(actions**2, axis=(1, 2))

    def control_variate(self, states, actions, noises):
        return np.zeros(states.shape[0])


class CrossActionPenalty:
    """Claims affinity but multiplies the first two trades."""

    affine_in_action = True

    def evaluate(self, states, actions, noises):
        return actions[:, 0, 0] * actions[:, 1, 0]

    def control_variate(self, states, actions, noises):
        return np.zeros(states.shape[0])


class PeekingPolicy:
    non_anticipative = False

    def act(self, n, states):
        return np.zeros((states.shape[0], 1))


def _oracle_penalty(mdp: FiniteActionMdp):
    """Indicator-basis penalty fitted on exploring paths with tabular regressors."""
    solution = backward_induction(mdp)
    basis = BasisSpec.indicator(mdp.finite_noise)
    cells = [solution.state_action_pairs(n, mdp.actions) for n in range(mdp.horizon)]
    regressors = tabular_regressors(mdp.horizon, basis.size, cells)
    penalty = fit_coordinates(exploring_paths(mdp, solution), basis, regressors, ridge=0.0)
    return solution, penalty


def _estimate(mean: float, half_width: float) -> BoundEstimate:
    return BoundEstimate(mean=mean, std_error=half_width / 1.96, half_width=half_width, count=100)


class TestPenaltyEvaluate:
    """Test penalty evaluation on trajectories."""

    def _model(self, theta: float) -> PenaltyModel:
        basis = BasisSpec.taylor(FiniteNoise.equiprobable([-1.0, 1.0]), 1)
        regressors = intercept_regressors(2, basis.size)
        return PenaltyModel(
            basis=basis,
            regressors=regressors,
            coefficients={(0, 0): np.array([theta]), (1, 0): np.array([theta])},
        )

    def test_zero_coefficients(self):
        """All-zero coordinates give exactly zero."""
        value = penalty_evaluate(self._model(0.0), np.zeros((3, 1)), np.zeros((2, 1)), np.array([[0.3], [-0.3]]))
        assert value == 0.0

    def test_unit_coordinate(self):
        """beta = 1 on d_1 with noises 0.3 and -0.3 sums to zero."""
        value = penalty_evaluate(self._model(1.0), np.zeros((3, 1)), np.zeros((2, 1)), np.array([[0.3], [-0.3]]))
        assert isinstance(value, float)
        assert value == pytest.approx(0.0, abs=1e-15)

    def test_batch(self):
        """Batches return one value per trajectory."""
        noises = np.array([[[0.3], [0.2]], [[1.0], [-2.0]]])
        values = penalty_evaluate(self._model(2.0), np.zeros((2, 3, 1)), np.zeros((2, 2, 1)), noises)
        np.testing.assert_allclose(values, [1.0, -2.0])

    def test_zero_penalty(self):
        """The zero penalty is zero everywhere."""
        assert np.all(ZeroPenalty().evaluate(np.ones((4, 3, 1)), np.ones((4, 2, 1)), np.ones((4, 2, 1))) == 0.0)


class TestFeasibility:
    """Test zero-mean checks of penalties."""

    def test_zero_penalty_passes(self, scalar_lqc, scalar_lqc_solution):
        """The zero penalty has mean exactly zero."""
        check = check_feasibility(
            ZeroPenalty(), scalar_lqc_solution.policy(), LqcMdp(scalar_lqc), 1000, seed=1
        )
        assert check.mean == 0.0
        assert check.passed

    def test_squared_noise_fails(self, scalar_lqc, scalar_lqc_solution):
        """sum z^2 has mean N under standard normal noise."""
        check = check_feasibility(
            SquaredNoisePenalty(), scalar_lqc_solution.policy(), LqcMdp(scalar_lqc), 20_000, seed=1
        )
        assert check.mean == pytest.approx(4.0, rel=0.05)
        assert not check.passed

    def test_anticipative_policy_rejected(self, scalar_lqc):
        """Feasibility is only defined for non-anticipative policies."""
        with pytest.raises(AnticipativePolicyError):
            check_feasibility(ZeroPenalty(), PeekingPolicy(), LqcMdp(scalar_lqc), 1000, seed=1)

    def test_minimum_paths(self, scalar_lqc, scalar_lqc_solution):
        """Sampled checks need at least 1000 paths."""
        with pytest.raises(ArgumentError):
            check_feasibility(ZeroPenalty(), scalar_lqc_solution.policy(), LqcMdp(scalar_lqc), 999, seed=1)

    def test_exact_enumeration(self, discrete_mdp):
        """Finite models are checked exactly: the oracle passes, z^2 fails."""
        _, penalty = _oracle_penalty(discrete_mdp)
        passed = check_feasibility(penalty, ConstantPolicy(1.0), discrete_mdp, 0, seed=0)
        assert passed.exact and passed.passed
        failed = check_feasibility(SquaredNoisePenalty(), ConstantPolicy(1.0), discrete_mdp, 0, seed=0)
        assert failed.exact and not failed.passed

    @pytest.mark.parametrize("kind", [PenaltyKind.TAYLOR_1, PenaltyKind.TAYLOR_2])
    def test_fitted_trading_penalties(self, small_trading_model, kind):
        """Fitted trading penalties have zero mean under PLQC on fresh paths."""
        solution = trading_value_recursion(small_trading_model)
        mdp = TradingMdp(small_trading_model)
        policy = PlqcPolicy(small_trading_model, solution)
        paths = simulate_paths(mdp, policy, 5000, seed=2)
        penalty = build_penalty(kind, small_trading_model, solution, paths)
        check = check_feasibility(penalty, policy, mdp, 20_000, seed=2)
        assert check.passed

    def test_squared_noise_fails_on_trading(self, small_trading_model):
        """The uncentered fixture fails the same trading check."""
        solution = trading_value_recursion(small_trading_model)
        mdp = TradingMdp(small_trading_model)
        check = check_feasibility(
            SquaredNoisePenalty(), PlqcPolicy(small_trading_model, solution), mdp, 20_000, seed=2
        )
        assert not check.passed


class TestStrongDuality:
    """Test that optimal penalties close the gap path by path."""

    def test_lqc_pathwise(self, scalar_lqc, scalar_lqc_solution):
        """With the optimal LQC penalty every inner value equals V_0."""
        v0 = scalar_lqc_solution.initial_value()
        result = estimate_upper_bound(
            LqcMdp(scalar_lqc), LqcExactPenalty(scalar_lqc_solution), 50, seed=3, tol=1e-12
        )
        np.testing.assert_allclose(result.values, v0, rtol=1e-6)
        assert result.estimate.half_width <= 1e-6 * abs(result.estimate.mean)

    def test_enumeration_oracle(self, discrete_mdp):
        """The fitted oracle penalty gives UB = V_0 and constant inner values."""
        solution, penalty = _oracle_penalty(discrete_mdp)
        v0 = solution.initial_value
        assert abs(exact_upper_bound(discrete_mdp, penalty) - v0) <= 1e-10
        for sequence, _ in discrete_mdp.finite_noise.enumerate_paths(discrete_mdp.horizon):
            assert abs(inner_value(discrete_mdp, sequence, penalty).value - v0) <= 1e-10

    def test_zero_penalty_bounds_from_above(self, discrete_mdp):
        """Perfect foresight without a penalty is worth at least V_0."""
        v0 = backward_induction(discrete_mdp).initial_value
        assert exact_upper_bound(discrete_mdp, ZeroPenalty()) >= v0 - 1e-12

    def test_deterministic_model(self):
        """With a single noise atom the zero-penalty UB is V_0."""
        mdp = FiniteActionMdp(
            horizon=3,
            initial_state=[1.0],
            actions=[-1.0, 0.0, 1.0],
            noise=FiniteNoise(atoms=np.array([0.0]), probabilities=np.array([1.0])),
            transition_fn=lambda n, x, a, z: x + a + z,
            reward_fn=lambda n, x, a: -(x[:, 0] ** 2) - 0.1 * a[:, 0] ** 2,
            terminal_fn=lambda x: -(x[:, 0] ** 2),
        )
        v0 = backward_induction(mdp).initial_value
        assert exact_upper_bound(mdp, ZeroPenalty()) == pytest.approx(v0, abs=1e-14)
        estimate = estimate_upper_bound(mdp, ZeroPenalty(), 3, seed=0).estimate
        assert estimate.mean == pytest.approx(v0, abs=1e-14)
        assert estimate.half_width == 0.0


class TestInnerProblems:
    """Test inner-problem assembly."""

    def test_linearization(self, scalar_lqc, scalar_lqc_solution):
        """The optimal LQC penalty is affine in the stacked actions."""
        mdp = LqcMdp(scalar_lqc)
        noises = np.array([[0.5], [-1.0], [0.2], [1.3]])
        slope, base, _ = linearize_penalty(mdp, LqcExactPenalty(scalar_lqc_solution), noises)
        u = np.array([0.3, -0.7, 1.1, 0.4])
        states = mdp.rollout(u.reshape(1, 4, 1), noises)
        direct = LqcExactPenalty(scalar_lqc_solution).evaluate(states, u.reshape(1, 4, 1), noises[None])
        assert base + slope @ u == pytest.approx(direct[0], rel=1e-10)

    def test_declared_non_affine(self, scalar_lqc):
        """Penalties declaring non-affinity are refused by QP models."""
        basis = BasisSpec.indicator(FiniteNoise.equiprobable([-1.0, 1.0]))
        regressors = tabular_regressors(4, basis.size, [[((0.0,), (0.0,))]] * 4)
        penalty = PenaltyModel.zero(basis, regressors)
        with pytest.raises(NonAffinePenaltyError):
            build_inner_problem(LqcMdp(scalar_lqc), np.zeros((4, 1)), penalty)

    def test_detected_non_affine(self, scalar_lqc):
        """A separable quadratic penalty posing as affine is refused."""
        with pytest.raises(NonAffinePenaltyError):
            build_inner_problem(LqcMdp(scalar_lqc), np.zeros((4, 1)), SquaredActionPenalty())

    def test_detected_cross_term(self, scalar_lqc):
        """A product of two trades has no curvature along any single trade but is refused."""
        with pytest.raises(NonAffinePenaltyError):
            build_inner_problem(LqcMdp(scalar_lqc), np.zeros((4, 1)), CrossActionPenalty())

    def test_fitted_trading_penalty_accepted(self, small_trading_model):
        """Second-order regression penalties on the trading model pass the affinity check."""
        mdp = TradingMdp(small_trading_model)
        solution = trading_value_recursion(small_trading_model)
        paths = simulate_paths(mdp, PlqcPolicy(small_trading_model, solution), 200, seed=4)
        penalty = build_penalty(PenaltyKind.TAYLOR_2, small_trading_model, solution, paths)
        noises = upper_bound_noises(mdp, 1, seed=4)[0]
        problem = build_inner_problem(mdp, noises, penalty)
        assert problem.qp.num_variables == mdp.horizon * mdp.action_dim

    def test_finite_models_have_no_qp(self, discrete_mdp):
        """Finite-action models are solved by enumeration only."""
        with pytest.raises(ArgumentError):
            build_inner_problem(discrete_mdp, np.ones((2, 1)), ZeroPenalty())

    def test_enumeration_first_maximizer(self):
        """Ties go to the first action sequence."""
        mdp = FiniteActionMdp(
            horizon=1,
            initial_state=[0.0],
            actions=[-1.0, 1.0],
            noise=FiniteNoise(atoms=np.array([0.0]), probabilities=np.array([1.0])),
            transition_fn=lambda n, x, a, z: x + a,
            reward_fn=lambda n, x, a: np.zeros(x.shape[0]),
            terminal_fn=lambda x: x[:, 0] ** 2,
        )
        solution = inner_value(mdp, np.zeros((1, 1)), ZeroPenalty())
        assert solution.actions[0, 0] == -1.0
        assert solution.value == 1.0


class TestUpperBound:
    """Test Monte Carlo upper bounds."""

    def test_needs_two_paths(self, scalar_lqc, scalar_lqc_solution):
        """L < 2 is an argument error."""
        with pytest.raises(ArgumentError):
            estimate_upper_bound(LqcMdp(scalar_lqc), LqcExactPenalty(scalar_lqc_solution), 1, seed=0)

    def test_worker_count_irrelevant(self, scalar_lqc, scalar_lqc_solution):
        """Inner values do not depend on the pool size."""
        mdp = LqcMdp(scalar_lqc)
        penalty = LqcExactPenalty(scalar_lqc_solution)
        one = estimate_upper_bound(mdp, penalty, 8, seed=5, workers=1, warm_start=False)
        four = estimate_upper_bound(mdp, penalty, 8, seed=5, workers=4, warm_start=False)
        np.testing.assert_array_equal(one.values, four.values)

    def test_zero_penalty_dominates_policy(self, tiny_trading_model):
        """On every path perfect foresight is worth at least the PLQC reward."""
        solution = trading_value_recursion(tiny_trading_model)
        mdp = TradingMdp(tiny_trading_model)
        policy = PlqcPolicy(tiny_trading_model, solution)
        paths = simulate_paths(mdp, policy, 40, seed=4, stream=Stream.UPPER)
        upper = estimate_upper_bound(mdp, ZeroPenalty(), 40, seed=4)
        np.testing.assert_array_equal(upper_bound_noises(mdp, 40, 4), paths.noises)
        slack = 1e-6 * np.maximum(1.0, np.abs(paths.values[:, 0]))
        assert np.all(upper.values >= paths.values[:, 0] - slack)
        assert all(status is QpStatus.OPTIMAL for status in upper.statuses)

    def test_second_order_only_shifts_values(self):
        """UB3 and UB2 share optimizers; their values differ by the control variates."""
        model = build_model(1, 4)
        solution = trading_value_recursion(model)
        mdp = TradingMdp(model)
        paths = simulate_paths(mdp, PlqcPolicy(model, solution), 2000, seed=6)
        first = build_penalty(PenaltyKind.TAYLOR_1, model, solution, paths)
        second = build_penalty(PenaltyKind.TAYLOR_2, model, solution, paths)

        rng = np.random.default_rng(0)
        noises = rng.standard_normal((5, 4, 2)) * 0.2
        states = np.concatenate([rng.uniform(0, 1e4, (5, 5, 1)), rng.standard_normal((5, 5, 2))], axis=2)
        actions = -rng.uniform(0, 1e3, (5, 4, 1))
        scale = np.abs(first.evaluate(states, actions, noises)).max()
        np.testing.assert_allclose(
            second.evaluate(states, actions, noises) - first.evaluate(states, actions, noises),
            second.control_variate(states, actions, noises) - first.control_variate(states, actions, noises),
            atol=1e-8 * max(1.0, scale),
        )

        ub2 = estimate_upper_bound(mdp, first, 10, seed=6)
        ub3 = estimate_upper_bound(mdp, second, 10, seed=6)
        np.testing.assert_allclose(
            ub2.values - ub3.values, ub3.control_variates - ub2.control_variates,
            atol=1e-6 * max(1.0, float(np.abs(ub2.values).max())),
        )


class TestDualityGap:
    """Test gap reporting."""

    def test_reference_gap(self):
        """LB 14.937 against UB 15.263 is a 2.18% gap."""
        report = duality_gap(_estimate(14.937, 0.074), {PenaltyKind.TAYLOR_2: _estimate(15.263, 0.055)})
        assert report.gap_pct == 2.18
        assert report.gap_abs == pytest.approx(0.326)
        assert report.within_noise

    def test_larger_reference_gap(self):
        """LB 62.971 against UB 64.401 is a 2.27% gap."""
        report = duality_gap(_estimate(62.971, 0.1), {PenaltyKind.TAYLOR_2: _estimate(64.401, 0.1)})
        assert report.gap_pct == 2.27

    def test_tightest_penalty(self):
        """The smallest upper bound defines the gap."""
        report = duality_gap(
            _estimate(14.937, 0.074),
            {
                PenaltyKind.ZERO: _estimate(18.096, 0.1),
                PenaltyKind.TAYLOR_1: _estimate(15.4, 0.1),
                PenaltyKind.TAYLOR_2: _estimate(15.263, 0.05),
            },
        )
        assert report.tightest is PenaltyKind.TAYLOR_2

    def test_equal_bounds(self):
        """UB = LB is a zero gap."""
        assert duality_gap(_estimate(3.0, 0.1), {PenaltyKind.ZERO: _estimate(3.0, 0.1)}).gap_pct == 0.0

    def test_non_positive_lower_bound(self):
        """A negative LB keeps the absolute gap and drops the ratio."""
        report = duality_gap(_estimate(-5.0, 0.1), {PenaltyKind.ZERO: _estimate(-4.0, 0.1)})
        assert report.gap_pct is None
        assert not report.ratio_defined
        assert report.gap_abs == pytest.approx(1.0)

    def test_weak_duality_violation_flagged(self):
        """An upper bound clearly below the lower bound is flagged, not raised."""
        report = duality_gap(_estimate(10.0, 0.1), {PenaltyKind.TAYLOR_1: _estimate(9.0, 0.1)})
        assert not report.within_noise

    def test_noise_level_crossing_tolerated(self):
        """A negative gap inside the half-widths is sampling noise."""
        report = duality_gap(_estimate(10.0, 0.5), {PenaltyKind.TAYLOR_1: _estimate(9.8, 0.5)})
        assert report.within_noise
        assert math.isclose(report.gap_abs, -0.2, abs_tol=1e-12)

    def test_no_uppers(self):
        """Without upper bounds there is no gap."""
        report = duality_gap(_estimate(1.0, 0.1), {})
        assert report.tightest is None
        assert report.gap_pct is None
