"""Unit tests for penalty basis functions, coordinate weights and zero-mean checks."""

import numpy as np
import pytest

from basis import (
    BasisKind,
    BasisSpec,
    basis_zero_mean_check,
    coordinate_weights,
    hermite_eval,
    hermite_matrix,
    indicator_eval,
    normal_expectation,
    taylor_basis_eval,
    zero_mean_check,
)
from errors import ArgumentError, SingularSystemError
from providers.noise import FiniteNoise, GaussianNoise


class TestTaylorBasis:
    """Test centered monomials and their coordinate weights."""

    def test_eval(self):
        """d_r(z) = z^r - E z^r."""
        moments = [0.0, 1.0, 0.0]
        assert taylor_basis_eval(1, 2.0, moments) == 2.0
        assert taylor_basis_eval(2, 2.0, moments) == 3.0
        assert taylor_basis_eval(3, 2.0, moments) == 8.0

    def test_eval_order_out_of_range(self):
        """Orders outside 1..R are argument errors."""
        with pytest.raises(ArgumentError):
            taylor_basis_eval(0, 1.0, [0.0, 1.0])
        with pytest.raises(ArgumentError):
            taylor_basis_eval(3, 1.0, [0.0, 1.0])

    def test_standard_normal_weights(self):
        """For N(0,1) and R = 2 the weight matrix is diag(1, 1/2)."""
        weights = coordinate_weights(GaussianNoise.standard(1), 2)
        np.testing.assert_allclose(weights.matrices[0], np.diag([1.0, 0.5]), atol=1e-12)

    def test_scaled_normal_weights(self):
        """For N(0, s2) the first-order weight function is z / s2."""
        s2 = 0.0379
        weights = coordinate_weights(GaussianNoise.diagonal([s2]), 2)
        z = np.array([[0.1], [-0.3]])
        np.testing.assert_allclose(weights.weight_functions(z)[:, 0, 0], z[:, 0] / s2, rtol=1e-10)

    def test_two_point_second_order_singular(self):
        """Two-point noise makes z^2 affinely dependent on z."""
        noise = FiniteNoise.equiprobable([-1.0, 1.0])
        with pytest.raises(SingularSystemError) as excinfo:
            coordinate_weights(noise, 2)
        assert excinfo.value.monomial == "z^2"

    def test_two_point_first_order_fine(self):
        """R = 1 is well posed for two-point noise."""
        weights = coordinate_weights(FiniteNoise.equiprobable([-1.0, 1.0]), 1)
        assert weights.matrices[0, 0, 0] == pytest.approx(1.0)

    def test_order_must_be_positive(self):
        """R = 0 is an argument error."""
        with pytest.raises(ArgumentError):
            coordinate_weights(GaussianNoise.standard(1), 0)

    def test_coordinate_recovers_coefficients(self):
        """E[V l_r(z)] recovers the coefficients of V = a + b z + c (z^2 - 1)."""
        basis = BasisSpec.taylor(GaussianNoise.standard(1), 2)
        a, b, c = 0.7, -1.3, 2.1

        def weighted(nodes: np.ndarray) -> np.ndarray:
            z = nodes[:, None]
            v = a + b * nodes + c * (nodes**2 - 1.0)
            return v[:, None] * basis.response_weights(z)

        np.testing.assert_allclose(normal_expectation(weighted), [b, c], atol=1e-12)

    def test_vector_layout(self):
        """Index (r, k) sits at (r - 1) * d + k."""
        basis = BasisSpec.taylor(GaussianNoise.diagonal([1.0, 2.0]), 2)
        assert basis.size == 4
        assert basis.position(2, 1) == 3
        assert [index.label for index in basis.indices] == ["1:0", "1:1", "2:0", "2:1"]
        values = basis.evaluate(np.array([[1.0, 3.0]]))
        np.testing.assert_allclose(values[0], [1.0, 3.0, 0.0, 7.0])


class TestHermiteBasis:
    """Test normalized Hermite polynomials."""

    def test_low_orders(self):
        """e_1 = z and e_2 = (z^2 - 1)/sqrt(2)."""
        assert hermite_eval(1, 0.5) == pytest.approx(0.5)
        assert hermite_eval(2, 2.0) == pytest.approx(3.0 / np.sqrt(2.0))
        assert hermite_eval(3, 1.0) == pytest.approx(-2.0 / np.sqrt(6.0))

    def test_root_of_third(self):
        """e_3 vanishes at sqrt(3)."""
        assert hermite_eval(3, np.sqrt(3.0)) == pytest.approx(0.0, abs=1e-12)

    def test_constant_rejected(self):
        """e_0 is never a penalty basis function."""
        with pytest.raises(ArgumentError):
            hermite_eval(0, 1.0)

    def test_orthonormal(self):
        """E[e_i e_j] = delta_ij under N(0,1)."""
        gram = normal_expectation(
            lambda z: np.einsum("bi,bj->bij", hermite_matrix(z, 6), hermite_matrix(z, 6))
        )
        np.testing.assert_allclose(gram, np.eye(6), atol=1e-8)

    def test_zero_mean(self):
        """Every e_i with i >= 1 has zero mean."""
        np.testing.assert_allclose(normal_expectation(lambda z: hermite_matrix(z, 5)), 0.0, atol=1e-10)

    def test_requires_gaussian(self):
        """The Hermite basis is defined only for Gaussian noise."""
        with pytest.raises(ArgumentError):
            BasisSpec.hermite(FiniteNoise.equiprobable([-1.0, 1.0]))

    def test_whitened(self):
        """Correlated noise is whitened before evaluation."""
        noise = GaussianNoise.diagonal([4.0])
        basis = BasisSpec.hermite(noise, 2)
        np.testing.assert_allclose(basis.evaluate(np.array([[2.0]]))[0], [1.0, 0.0], atol=1e-12)


class TestIndicatorBasis:
    """Test the scaled indicator basis."""

    def test_eval(self):
        """g_i is 1/sqrt(rho_i) on atom i and zero elsewhere."""
        table = FiniteNoise(atoms=np.array([-1.0, 1.0]), probabilities=np.array([0.25, 0.75]))
        assert indicator_eval(0, -1.0, table) == pytest.approx(2.0)
        assert indicator_eval(0, 1.0, table) == 0.0

    def test_equiprobable_pair(self):
        """Two equiprobable atoms give sqrt(2) on each."""
        table = FiniteNoise.equiprobable([-1.0, 1.0])
        assert indicator_eval(1, 1.0, table) == pytest.approx(np.sqrt(2.0), abs=1e-15)

    def test_centered(self):
        """b_i = g_i - sqrt(rho_i) has exact zero mean."""
        table = FiniteNoise(atoms=np.array([0.0, 1.0, 5.0]), probabilities=np.array([0.2, 0.3, 0.5]))
        basis = BasisSpec.indicator(table)
        assert basis.kind is BasisKind.INDICATOR
        check = basis_zero_mean_check(basis, table, draws=0, seed=0)
        assert check.exact
        assert check.passed

    def test_orthonormal(self):
        """E[g_i g_j] = delta_ij under rho."""
        table = FiniteNoise(atoms=np.array([0.0, 1.0, 5.0]), probabilities=np.array([0.2, 0.3, 0.5]))
        g = BasisSpec.indicator(table).response_weights(table.atoms)
        gram = np.einsum("p,pi,pj->ij", table.probabilities, g, g)
        np.testing.assert_allclose(gram, np.eye(3), atol=1e-14)

    def test_outside_support(self):
        """Points off the table are argument errors."""
        table = FiniteNoise.equiprobable([0.0, 1.0])
        with pytest.raises(ArgumentError):
            indicator_eval(0, 0.5, table)

    def test_requires_finite(self):
        """The indicator basis is defined only for finite noise."""
        with pytest.raises(ArgumentError):
            BasisSpec.indicator(GaussianNoise.standard(1))


class TestZeroMeanCheck:
    """Test the zero-mean checks."""

    def test_taylor_passes(self):
        """Centered monomials pass under Gaussian sampling."""
        basis = BasisSpec.taylor(GaussianNoise.diagonal([0.5, 2.0]), 2)
        check = basis_zero_mean_check(basis, basis.noise, draws=20_000, seed=3)
        assert not check.exact
        assert check.passed

    def test_biased_function_fails(self):
        """z^2 without centering fails."""
        check = zero_mean_check(lambda z: z[:, 0] ** 2, GaussianNoise.standard(1), draws=5000, seed=1)
        assert not check.passed

    def test_exact_failure_on_finite(self):
        """An uncentered function on finite noise fails exactly."""
        table = FiniteNoise(atoms=np.array([-1.0, 1.0]), probabilities=np.array([0.4, 0.6]))
        check = zero_mean_check(lambda z: z[:, 0], table, draws=0, seed=0)
        assert check.exact
        assert check.means[0] == pytest.approx(0.2)
        assert not check.passed

    def test_minimum_draws(self):
        """Sampled checks need at least 1000 draws."""
        with pytest.raises(ArgumentError):
            zero_mean_check(lambda z: z[:, 0], GaussianNoise.standard(1), draws=999, seed=0)
