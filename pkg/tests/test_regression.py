"""
Unit tests for coordinate regressions and regression-based penalties.

Tests cover:
1. OLS solves, weights, ridge and rank deficiency
2. Fitted LQC coordinates against their closed form
3. Zero mean of penalties with arbitrary coefficients
4. Control variates from constant features
"""

import numpy as np
import pytest

from basis.spec import BasisSpec
from duality.feasibility import check_feasibility
from errors import ArgumentError, RankDeficiencyWarning, RegressionError
from lqc.mdp import LqcMdp
from lqc.penalties import lqc_penalty_model
from mdp.simulation import simulate_paths
from regression import (
    PenaltyModel,
    fit_coordinates,
    intercept_regressors,
    linear_regressors,
    ols_diagnostics,
    ols_solve,
)
from regression.fitting import coordinate_responses


class TestOls:
    """Test the least-squares solver."""

    def test_exact_fit(self):
        """Noiseless responses are reproduced."""
        rng = np.random.default_rng(0)
        design = np.column_stack([np.ones(50), rng.standard_normal(50)])
        theta = ols_solve(design, design @ np.array([1.5, -2.0]), ridge=0.0)
        np.testing.assert_allclose(theta, [1.5, -2.0], atol=1e-12)

    def test_two_point_mean(self):
        """A column of ones against (2, 4) gives 3."""
        theta = ols_solve(np.ones((2, 1)), np.array([2.0, 4.0]), ridge=0.0)
        assert theta[0] == pytest.approx(3.0, abs=1e-14)

    def test_intercept_is_sample_mean(self):
        """An intercept-only design returns the response mean."""
        responses = np.random.default_rng(2).standard_normal(101)
        theta = ols_solve(np.ones((101, 1)), responses, ridge=0.0)
        assert theta[0] == pytest.approx(responses.mean(), abs=1e-12)

    def test_weights(self):
        """Zero-weight rows do not influence the fit."""
        design = np.ones((3, 1))
        theta = ols_solve(design, np.array([1.0, 1.0, 100.0]), weights=np.array([0.5, 0.5, 0.0]), ridge=0.0)
        assert theta[0] == pytest.approx(1.0)

    def test_negative_weights_rejected(self):
        """Sample weights must be non-negative."""
        with pytest.raises(ArgumentError):
            ols_solve(np.ones((2, 1)), np.ones(2), weights=np.array([1.0, -1.0]), ridge=0.0)

    def test_rank_deficient_warns(self):
        """Duplicate columns warn and return the minimum-norm solution."""
        x = np.linspace(-1.0, 1.0, 20)
        design = np.column_stack([x, x])
        with pytest.warns(RankDeficiencyWarning, match="period 3"):
            theta = ols_solve(design, 2.0 * x, ridge=0.0, context="period 3, index 0")
        np.testing.assert_allclose(theta, [1.0, 1.0], atol=1e-10)

    def test_too_few_samples(self):
        """Underdetermined designs need a ridge."""
        with pytest.raises(ArgumentError):
            ols_solve(np.ones((1, 2)), np.ones(1), ridge=0.0)

    def test_ridge_allows_underdetermined(self):
        """With a ridge fewer rows than columns are allowed."""
        theta = ols_solve(np.ones((1, 2)), np.ones(1), ridge=1.0)
        np.testing.assert_allclose(theta, [1.0 / 3.0, 1.0 / 3.0], atol=1e-12)

    def test_zero_design(self):
        """An all-zero design is a regression error."""
        with pytest.raises(RegressionError):
            ols_solve(np.zeros((5, 1)), np.ones(5), ridge=0.0)

    def test_robust_errors(self):
        """HC0 errors vanish for an exact fit and are positive otherwise."""
        design = np.column_stack([np.ones(4), np.arange(4.0)])
        exact = ols_diagnostics(design, design @ np.array([1.0, 1.0]), np.array([1.0, 1.0]))
        np.testing.assert_allclose(exact.std_errors, 0.0, atol=1e-12)
        assert exact.rank == 2
        noisy = ols_diagnostics(design, np.array([0.0, 2.5, 2.5, 4.5]), np.array([1.0, 1.0]))
        assert np.all(noisy.std_errors > 0.0)


class TestCoordinateFit:
    """Test fitted coordinates on simulated LQC paths."""

    def test_lqc_coordinates_recovered(self, scalar_lqc, scalar_lqc_solution):
        """Fitted thetas lie within 4 robust standard errors of the closed form."""
        mdp = LqcMdp(scalar_lqc)
        paths = simulate_paths(mdp, scalar_lqc_solution.policy(), 20_000, seed=17)
        basis = BasisSpec.taylor(scalar_lqc.noise, 2)
        exact = lqc_penalty_model(scalar_lqc_solution, basis)
        fitted = fit_coordinates(paths, basis, exact.regressors, ridge=0.0)
        responses = coordinate_responses(paths, basis)

        for n in range(scalar_lqc.horizon):
            for i in range(basis.size):
                design = exact.regressors.design(n, i, paths.states[:, n], paths.actions[:, n])
                theta = fitted.theta(n, i)
                errors = ols_diagnostics(design, responses[:, n, i], theta).std_errors
                assert np.all(np.abs(theta - exact.theta(n, i)) <= 4.0 * errors + 1e-12)

    def test_horizon_mismatch(self, scalar_lqc, scalar_lqc_solution):
        """Regressors must cover the path horizon."""
        mdp = LqcMdp(scalar_lqc)
        paths = simulate_paths(mdp, scalar_lqc_solution.policy(), 50, seed=1)
        basis = BasisSpec.taylor(scalar_lqc.noise, 1)
        with pytest.raises(ArgumentError):
            fit_coordinates(paths, basis, intercept_regressors(3, basis.size))

    def test_fitted_penalty_feasible(self, scalar_lqc, scalar_lqc_solution):
        """A fitted penalty has zero mean on independent paths."""
        mdp = LqcMdp(scalar_lqc)
        policy = scalar_lqc_solution.policy()
        paths = simulate_paths(mdp, policy, 2000, seed=4)
        basis = BasisSpec.taylor(scalar_lqc.noise, 2)
        penalty = fit_coordinates(paths, basis, linear_regressors(4, basis.size, 1, 1), ridge=0.0)
        check = check_feasibility(penalty, policy, mdp, 20_000, seed=4)
        assert check.passed


class TestPenaltyModel:
    """Test penalty evaluation."""

    def test_zero_model(self, scalar_lqc, scalar_lqc_solution):
        """All-zero coefficients give exactly zero."""
        basis = BasisSpec.taylor(scalar_lqc.noise, 2)
        model = PenaltyModel.zero(basis, linear_regressors(4, basis.size, 1, 1))
        paths = simulate_paths(LqcMdp(scalar_lqc), scalar_lqc_solution.policy(), 10, seed=1)
        assert np.all(model.evaluate(paths.states, paths.actions, paths.noises) == 0.0)

    def test_perturbed_coefficients_stay_feasible(self, scalar_lqc, scalar_lqc_solution):
        """Random coefficients never break the zero mean."""
        mdp = LqcMdp(scalar_lqc)
        basis = BasisSpec.taylor(scalar_lqc.noise, 2)
        exact = lqc_penalty_model(scalar_lqc_solution, basis)
        rng = np.random.default_rng(8)
        for _ in range(3):
            perturbed = exact.perturbed(1.0, rng)
            check = check_feasibility(perturbed, scalar_lqc_solution.policy(), mdp, 20_000, seed=6)
            assert check.passed

    def test_control_variate_is_intercept_part(self, scalar_lqc, scalar_lqc_solution):
        """The control variate equals the second-order intercept terms."""
        basis = BasisSpec.taylor(scalar_lqc.noise, 2)
        exact = lqc_penalty_model(scalar_lqc_solution, basis)
        paths = simulate_paths(LqcMdp(scalar_lqc), scalar_lqc_solution.policy(), 25, seed=2)
        K_next = scalar_lqc_solution.K[1:, 0, 0]
        z = paths.noises[:, :, 0]
        expected = -np.sum(K_next * (z**2 - 1.0), axis=1)
        np.testing.assert_allclose(
            exact.control_variate(paths.states, paths.actions, paths.noises), expected, rtol=1e-12
        )

    def test_coefficient_shape_checked(self, scalar_lqc):
        """Coefficient vectors must match their features."""
        basis = BasisSpec.taylor(scalar_lqc.noise, 1)
        regressors = intercept_regressors(4, basis.size)
        with pytest.raises(ArgumentError):
            PenaltyModel(basis=basis, regressors=regressors, coefficients={(0, 0): np.zeros(2)})
