"""KKT residuals of a QP at a candidate primal-dual point."""

import numpy as np

from solvers.problem import KktResiduals, QpProblem


def _norm(v: np.ndarray) -> float:
    return float(np.abs(v).max(initial=0.0))


def kkt_residuals(
    problem: QpProblem,
    u: np.ndarray,
    z: np.ndarray | None = None,
    y: np.ndarray | None = None,
) -> KktResiduals:
    """
    Unscaled infinity-norm residuals at (u, z, y).

    Missing multipliers are taken as zero.
    """
    G, h, A, b = problem.G, problem.h, problem.A, problem.b
    assert G is not None and h is not None and A is not None and b is not None
    u = np.asarray(u, dtype=np.float64)
    z = np.zeros(G.shape[0]) if z is None else np.asarray(z, dtype=np.float64)
    y = np.zeros(A.shape[0]) if y is None else np.asarray(y, dtype=np.float64)

    slack = h - G @ u
    primal = max(_norm(np.clip(-slack, 0.0, None)), _norm(A @ u - b))
    stationarity = problem.P @ u + problem.q + G.T @ z + A.T @ y
    dual = max(_norm(stationarity), _norm(np.clip(-z, 0.0, None)))
    return KktResiduals(
        primal=primal,
        dual=dual,
        complementarity=_norm(z * slack),
    )
