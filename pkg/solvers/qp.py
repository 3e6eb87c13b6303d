"""
Primal-dual interior-point method for dense convex QPs.

Mehrotra predictor-corrector on the slack form

    P x + q + G'z + A'y = 0,   A x = b,   G x + s = h,   s o z = 0,   s, z >= 0.

Slack and inequality-multiplier steps are eliminated, leaving the reduced
system [[P + G'DG, A'], [A, 0]] with D = Z S^-1, factorized once per
iteration and reused for both the predictor and the corrector. The method
is deterministic: identical inputs give identical iterates.
"""

import logging
import warnings

import numpy as np
from scipy.linalg import LinAlgError, LinAlgWarning, lu_factor, lu_solve
from scipy.optimize import linprog

from config import settings
from errors import NonConvexProblemError
from solvers.kkt import kkt_residuals
from solvers.problem import QpProblem, QpSolution, QpStatus

logger = logging.getLogger(__name__)

CONVEXITY_TOLERANCE = 1e-6
STEP_FACTOR = 0.99
DIVERGENCE_LIMIT = 1e14
_PIVOT_FLOOR = 1e-14


def check_convexity(problem: QpProblem) -> None:
    """
    Reject objectives with an eigenvalue below -1e-6 |P|.

    Raises:
        NonConvexProblemError: Naming the smallest eigenvalue
    """
    if problem.num_variables == 0:
        return
    eigenvalues = np.linalg.eigvalsh(problem.P)
    norm = float(np.abs(eigenvalues).max())
    if eigenvalues[0] < -CONVEXITY_TOLERANCE * norm:
        raise NonConvexProblemError(
            f"objective matrix is indefinite (min eigenvalue {eigenvalues[0]:.3e}, "
            f"norm {norm:.3e})",
            min_eigenvalue=float(eigenvalues[0]),
        )


class _ReducedSystem:
    """LU factorization of the reduced KKT matrix, regularized if singular."""

    def __init__(self, H: np.ndarray, A: np.ndarray):
        n, p = H.shape[0], A.shape[0]
        matrix = np.zeros((n + p, n + p))
        matrix[:n, :n] = H
        matrix[:n, n:] = A.T
        matrix[n:, :n] = A
        self.size = n
        self.factor = self._factorize(matrix, n)

    @staticmethod
    def _factorize(matrix: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
        scale = max(1.0, float(np.abs(matrix).max(initial=0.0)))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", LinAlgWarning)
            lu, piv = lu_factor(matrix, check_finite=False)
        if np.abs(np.diag(lu)).min(initial=np.inf) > _PIVOT_FLOOR * scale:
            return lu, piv
        delta = 1e-10 * scale
        regularized = matrix.copy()
        regularized[np.diag_indices(n)] += delta
        idx = np.arange(n, matrix.shape[0])
        regularized[idx, idx] -= delta
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", LinAlgWarning)
            return lu_factor(regularized, check_finite=False)

    def solve(self, top: np.ndarray, bottom: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        sol = lu_solve(self.factor, np.concatenate([top, bottom]), check_finite=False)
        return sol[: self.size], sol[self.size :]


def _max_step(v: np.ndarray, dv: np.ndarray) -> float:
    negative = dv < 0.0
    if not np.any(negative):
        return 1.0
    return float(min(1.0, np.min(-v[negative] / dv[negative])))


def _initial_point(
    problem: QpProblem, warm_start: np.ndarray | None
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    P, q, G, h, A, b = problem.P, problem.q, problem.G, problem.h, problem.A, problem.b
    assert G is not None and h is not None and A is not None and b is not None
    m = G.shape[0]

    if warm_start is not None:
        x = np.asarray(warm_start, dtype=np.float64).copy()
        y = np.zeros(A.shape[0])
    else:
        system = _ReducedSystem(P + G.T @ G, A)
        x, y = system.solve(-q + G.T @ h, b)

    s = h - G @ x
    if m:
        shortfall = -float(s.min())
        if shortfall >= 0.0:
            s = s + 1.0 + shortfall
    return x, s, np.ones(m), y


def _feasible(problem: QpProblem) -> bool:
    """Phase-one feasibility of the constraint set (HiGHS LP)."""
    n = problem.num_variables
    if problem.num_inequalities == 0 and problem.num_equalities == 0:
        return True
    result = linprog(
        c=np.zeros(n),
        A_ub=problem.G if problem.num_inequalities else None,
        b_ub=problem.h if problem.num_inequalities else None,
        A_eq=problem.A if problem.num_equalities else None,
        b_eq=problem.b if problem.num_equalities else None,
        bounds=[(None, None)] * n,
        method="highs",
    )
    return bool(result.status != 2)


def solve_qp(
    problem: QpProblem,
    tol: float | None = None,
    max_iter: int | None = None,
    *,
    warm_start: np.ndarray | None = None,
) -> QpSolution:
    """
    Solve a convex QP.

    The solve is optimal once every residual reported by kkt_residuals
    (absolute infinity norms) is at most tol.
    Infeasibility and the iteration cap are reported as statuses.

    Args:
        problem: The QP
        tol: Tolerance (default from settings)
        max_iter: Iteration cap (default from settings)
        warm_start: Optional starting primal point

    Raises:
        NonConvexProblemError: If P is indefinite
    """
    tol = settings.qp_tolerance if tol is None else tol
    max_iter = settings.qp_max_iterations if max_iter is None else max_iter
    check_convexity(problem)

    P, q, G, h, A, b = problem.P, problem.q, problem.G, problem.h, problem.A, problem.b
    assert G is not None and h is not None and A is not None and b is not None
    m = G.shape[0]

    primal_scale = 1.0 + float(np.abs(np.concatenate([h, b])).max(initial=0.0))
    dual_scale = 1.0 + float(np.abs(q).max(initial=0.0))

    x, s, z, y = _initial_point(problem, warm_start)
    best = (x, z, y)
    best_score = np.inf
    converged = False
    iteration = 0

    for iteration in range(max_iter + 1):
        r_dual = P @ x + q + G.T @ z + A.T @ y
        r_eq = A @ x - b
        r_in = G @ x + s - h
        mu = float(s @ z) / m if m else 0.0

        residuals = kkt_residuals(problem, x, z, y)
        score = residuals.worst
        if not np.isfinite(score):
            logger.debug(f"QP iterate became non-finite at iteration {iteration}")
            break
        if score < best_score:
            best, best_score = (x, z, y), score
        if score <= tol:
            converged = True
            break
        if iteration == max_iter:
            break
        if max(np.abs(x).max(initial=0.0), np.abs(z).max(initial=0.0)) > DIVERGENCE_LIMIT * (
            primal_scale + dual_scale
        ):
            logger.debug(f"QP iterates diverging at iteration {iteration}")
            break

        d = z / s
        try:
            system = _ReducedSystem(P + G.T @ (d[:, None] * G), A)
        except (LinAlgError, ValueError):
            logger.debug(f"QP reduced system failed at iteration {iteration}")
            break

        def direction(r_comp: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
            # ds = -r_in - G dx;  dz = S^-1 (-r_comp + Z r_in) + D G dx
            w = (-r_comp + z * r_in) / s
            dx, dy = system.solve(-r_dual - G.T @ w, -r_eq)
            ds = -r_in - G @ dx
            dz = w + d * (G @ dx)
            return dx, ds, dz, dy

        dx, ds, dz, dy = direction(s * z)
        if m:
            alpha = min(_max_step(s, ds), _max_step(z, dz))
            mu_aff = float((s + alpha * ds) @ (z + alpha * dz)) / m
            sigma = (mu_aff / mu) ** 3 if mu > 0.0 else 0.0
            dx, ds, dz, dy = direction(s * z + ds * dz - sigma * mu)
            alpha = min(1.0, STEP_FACTOR * min(_max_step(s, ds), _max_step(z, dz)))
        else:
            alpha = 1.0

        x = x + alpha * dx
        s = s + alpha * ds
        z = z + alpha * dz
        y = y + alpha * dy

    if converged:
        status = QpStatus.OPTIMAL
    else:
        x, z, y = best
        residuals = kkt_residuals(problem, x, z, y)
        status = QpStatus.MAX_ITERATIONS if _feasible(problem) else QpStatus.INFEASIBLE
        logger.debug(f"QP stopped after {iteration} iterations with status {status}")

    return QpSolution(
        x=x,
        value=problem.objective(x),
        status=status,
        residuals=residuals,
        iterations=iteration,
        z=z,
        y=y,
    )
