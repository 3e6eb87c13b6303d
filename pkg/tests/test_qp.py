"""Unit tests for the dense convex QP solver."""

import numpy as np
import pytest

from errors import ArgumentError, NonConvexProblemError
from solvers import QpProblem, QpStatus, check_convexity, kkt_residuals, solve_qp


def _random_box_qp(rng: np.random.Generator, n: int) -> QpProblem:
    root = rng.standard_normal((n, n))
    P = root @ root.T + 0.1 * np.eye(n)
    q = 3.0 * rng.standard_normal(n)
    G = np.vstack([np.eye(n), -np.eye(n)])
    h = np.ones(2 * n)
    return QpProblem(P=P, q=q, G=G, h=h)


class TestQpProblem:
    """Test problem validation."""

    def test_asymmetric_rejected(self):
        """P must be symmetric."""
        with pytest.raises(ArgumentError):
            QpProblem(P=np.array([[1.0, 1.0], [0.0, 1.0]]), q=np.zeros(2))

    def test_shapes_checked(self):
        """Constraint blocks must match the variable count."""
        with pytest.raises(ArgumentError):
            QpProblem(P=np.eye(2), q=np.zeros(2), G=np.ones((1, 3)), h=np.ones(1))

    def test_empty_blocks(self):
        """Missing constraints are empty arrays."""
        problem = QpProblem(P=np.eye(3), q=np.zeros(3))
        assert problem.num_inequalities == 0
        assert problem.num_equalities == 0

    def test_objective_includes_offset(self):
        """The constant c0 is part of the objective."""
        problem = QpProblem(P=np.eye(1), q=np.array([1.0]), c0=2.0)
        assert problem.objective(np.array([2.0])) == pytest.approx(6.0)


class TestSolveQp:
    """Test the interior-point solver."""

    def test_unconstrained(self):
        """Without constraints the optimizer is -P^-1 q."""
        P = np.array([[4.0, 1.0], [1.0, 3.0]])
        q = np.array([1.0, -2.0])
        solution = solve_qp(QpProblem(P=P, q=q), tol=1e-10)
        assert solution.optimal
        np.testing.assert_allclose(solution.x, -np.linalg.solve(P, q), atol=1e-9)

    def test_equality(self):
        """min |u|^2/2 subject to u1 + u2 = 1 is (1/2, 1/2)."""
        problem = QpProblem(P=np.eye(2), q=np.zeros(2), A=np.ones((1, 2)), b=np.ones(1))
        solution = solve_qp(problem, tol=1e-10)
        np.testing.assert_allclose(solution.x, [0.5, 0.5], atol=1e-9)
        assert solution.value == pytest.approx(0.25, abs=1e-9)

    def test_active_bound(self):
        """min (u - 2)^2 / 2 subject to u <= 1 stops at the bound."""
        problem = QpProblem(P=np.eye(1), q=np.array([-2.0]), G=np.eye(1), h=np.ones(1))
        solution = solve_qp(problem, tol=1e-10)
        assert solution.x[0] == pytest.approx(1.0, abs=1e-8)
        assert solution.z[0] == pytest.approx(1.0, abs=1e-7)

    def test_lower_bound_active(self):
        """min u^2 subject to u >= 1 has value 1."""
        problem = QpProblem(P=2.0 * np.eye(1), q=np.zeros(1), G=-np.eye(1), h=-np.ones(1))
        solution = solve_qp(problem, tol=1e-10)
        assert solution.value == pytest.approx(1.0, abs=1e-8)
        assert solution.x[0] == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("n", [2, 3, 5, 8, 10])
    def test_random_box_kkt(self, n):
        """Random box QPs converge with KKT residuals below 1e-8."""
        rng = np.random.default_rng(n)
        problem = _random_box_qp(rng, n)
        solution = solve_qp(problem, tol=1e-10, max_iter=200)
        assert solution.status is QpStatus.OPTIMAL
        assert solution.residuals.worst <= 1e-8
        trial = rng.uniform(-1.0, 1.0, size=(200, n))
        values = 0.5 * np.einsum("bi,ij,bj->b", trial, problem.P, trial) + trial @ problem.q
        assert solution.value <= values.min() + 1e-9

    @pytest.mark.parametrize("scale", [1.0, 1e2, 1e3])
    @pytest.mark.parametrize("tol", [1e-6, 1e-8])
    def test_optimal_meets_reported_residuals(self, scale, tol):
        """OPTIMAL means every reported residual is within tol at any data scale."""
        rng = np.random.default_rng(int(scale) + 7)
        base = _random_box_qp(rng, 6)
        problem = QpProblem(
            P=base.P,
            q=scale * base.q,
            G=base.G,
            h=scale * base.h,
            A=np.ones((1, 6)),
            b=np.array([0.5 * scale]),
        )
        solution = solve_qp(problem, tol=tol, max_iter=200)
        assert solution.status is QpStatus.OPTIMAL
        assert solution.residuals.worst <= tol
        assert kkt_residuals(problem, solution.x, solution.z, solution.y).worst <= tol

    def test_many_random_problems(self):
        """1000 random PSD problems of 2 to 10 variables all meet the KKT tolerance."""
        rng = np.random.default_rng(1000)
        for n in rng.integers(2, 11, size=1000):
            solution = solve_qp(_random_box_qp(rng, int(n)), tol=1e-10, max_iter=200)
            assert solution.status is QpStatus.OPTIMAL
            assert solution.residuals.worst <= 1e-8

    def test_grid_oracle(self):
        """A two-variable box QP matches a fine grid search."""
        problem = _random_box_qp(np.random.default_rng(21), 2)
        grid = np.linspace(-1.0, 1.0, 801)
        u1, u2 = np.meshgrid(grid, grid, indexing="ij")
        points = np.stack([u1.ravel(), u2.ravel()], axis=1)
        values = 0.5 * np.einsum("bi,ij,bj->b", points, problem.P, points) + points @ problem.q
        solution = solve_qp(problem, tol=1e-10)
        assert solution.value <= values.min() + 1e-9
        assert values.min() - solution.value <= 1e-4

    def test_warm_start(self):
        """A warm start reaches the same optimizer."""
        problem = _random_box_qp(np.random.default_rng(3), 4)
        cold = solve_qp(problem, tol=1e-10)
        warm = solve_qp(problem, tol=1e-10, warm_start=cold.x)
        np.testing.assert_allclose(warm.x, cold.x, atol=1e-7)

    def test_infeasible(self):
        """u <= -1 and u >= 1 together are reported infeasible."""
        problem = QpProblem(
            P=np.eye(1), q=np.zeros(1), G=np.array([[1.0], [-1.0]]), h=np.array([-1.0, -1.0])
        )
        assert solve_qp(problem, tol=1e-10, max_iter=50).status is QpStatus.INFEASIBLE

    def test_iteration_cap(self):
        """One iteration on a constrained problem stops at the cap."""
        problem = _random_box_qp(np.random.default_rng(5), 6)
        solution = solve_qp(problem, tol=1e-12, max_iter=1)
        assert solution.status is QpStatus.MAX_ITERATIONS

    def test_nonconvex(self):
        """Indefinite P raises with its smallest eigenvalue."""
        problem = QpProblem(P=np.diag([1.0, -1.0]), q=np.zeros(2))
        with pytest.raises(NonConvexProblemError) as excinfo:
            check_convexity(problem)
        assert excinfo.value.min_eigenvalue == pytest.approx(-1.0)
        with pytest.raises(NonConvexProblemError):
            solve_qp(problem)


class TestKktResiduals:
    """Test residual computation."""

    def test_optimum_has_zero_residuals(self):
        """The analytic optimum of an equality QP has zero residuals."""
        problem = QpProblem(P=np.eye(2), q=np.zeros(2), A=np.ones((1, 2)), b=np.ones(1))
        residuals = kkt_residuals(problem, np.array([0.5, 0.5]), y=np.array([-0.5]))
        assert residuals.worst == pytest.approx(0.0, abs=1e-15)

    def test_perturbed_optimizer(self):
        """Moving off the optimum shows up in the residuals."""
        problem = QpProblem(P=np.eye(2), q=np.zeros(2), A=np.ones((1, 2)), b=np.ones(1))
        residuals = kkt_residuals(problem, np.array([0.6, 0.5]), y=np.array([-0.5]))
        assert residuals.worst >= 0.05

    def test_violation_measured(self):
        """Primal violations show up in the primal residual."""
        problem = QpProblem(P=np.eye(1), q=np.zeros(1), G=np.eye(1), h=np.zeros(1))
        assert kkt_residuals(problem, np.array([2.0])).primal == pytest.approx(2.0)
