"""
Ordinary least squares for coordinate regressions.

Solves min_theta sum_j w_j (x_j' theta - y_j)^2 + ridge * |theta|^2 with a
pivoted complete orthogonal factorization (LAPACK gelsy), which returns the
minimum-norm minimizer when the design is rank deficient.
"""

import logging
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, lstsq, pinvh

from config import settings
from errors import ArgumentError, RankDeficiencyWarning, RegressionError

logger = logging.getLogger(__name__)


def _weighted(
    design: np.ndarray, responses: np.ndarray, weights: np.ndarray | None
) -> tuple[np.ndarray, np.ndarray]:
    if weights is None:
        return design, responses
    weights = np.asarray(weights, dtype=np.float64).ravel()
    if weights.shape[0] != design.shape[0] or np.any(weights < 0.0):
        raise ArgumentError("sample weights must be non-negative with one entry per row")
    root = np.sqrt(weights)
    return design * root[:, None], responses * root


def ols_solve(
    design: np.ndarray,
    responses: np.ndarray,
    *,
    weights: np.ndarray | None = None,
    ridge: float | None = None,
    rank_tolerance: float | None = None,
    context: str | None = None,
) -> np.ndarray:
    """
    Least-squares coefficients of responses on the design columns.

    Args:
        design: (M, K) design matrix X
        responses: (M,) responses y
        weights: Optional (M,) non-negative sample weights
        ridge: Ridge penalty (default from settings, 0 disables)
        rank_tolerance: Pivots below tolerance x largest pivot count as zero
        context: Label added to warnings (e.g. the regression's period and index)

    Returns:
        (K,) coefficient vector

    Raises:
        ArgumentError: If shapes disagree or M < K without ridge
        RegressionError: If the design is identically zero or the solve fails
    """
    design = np.asarray(design, dtype=np.float64)
    responses = np.asarray(responses, dtype=np.float64).ravel()
    if design.ndim != 2 or design.shape[0] != responses.shape[0]:
        raise ArgumentError(
            f"design {design.shape} does not match {responses.shape[0]} responses"
        )
    rows, columns = design.shape
    ridge = settings.ols_ridge if ridge is None else ridge
    tolerance = settings.ols_rank_tolerance if rank_tolerance is None else rank_tolerance

    if rows < columns and ridge <= 0.0:
        raise ArgumentError(f"need at least as many samples as regressors ({rows} < {columns})")
    if not np.any(design):
        raise RegressionError("design matrix is identically zero")

    x, y = _weighted(design, responses, weights)
    if ridge > 0.0:
        x = np.vstack([x, np.sqrt(ridge) * np.eye(columns)])
        y = np.concatenate([y, np.zeros(columns)])

    try:
        coefficients, _, rank, _ = lstsq(x, y, cond=tolerance, lapack_driver="gelsy")
    except (LinAlgError, ValueError) as e:
        raise RegressionError(f"least-squares solve failed: {e}") from e

    if rank < columns:
        where = f" ({context})" if context else ""
        warnings.warn(
            RankDeficiencyWarning(
                f"design has rank {rank} < {columns} columns{where}; "
                "returning the minimum-norm solution"
            ),
            stacklevel=2,
        )
    return np.asarray(coefficients, dtype=np.float64)


@dataclass(frozen=True, eq=False)
class OlsDiagnostics:
    """
    Residual diagnostics of a fitted regression.

    Attributes:
        residuals: (M,) y - X theta
        std_errors: (K,) heteroskedasticity-robust (HC0) standard errors
        rank: Numerical rank of the design
    """

    residuals: np.ndarray
    std_errors: np.ndarray
    rank: int


def ols_diagnostics(
    design: np.ndarray,
    responses: np.ndarray,
    coefficients: np.ndarray,
    weights: np.ndarray | None = None,
) -> OlsDiagnostics:
    """
    HC0 sandwich standard errors (X'X)^+ X' diag(e^2) X (X'X)^+.

    Responses of coordinate regressions are products V * h(z) whose variance
    grows with the state, so the robust form is the meaningful one.
    """
    design = np.asarray(design, dtype=np.float64)
    responses = np.asarray(responses, dtype=np.float64).ravel()
    residuals = responses - design @ coefficients
    x, e = _weighted(design, residuals, weights)

    bread = pinvh(x.T @ x)
    meat = (x * (e**2)[:, None]).T @ x
    covariance = bread @ meat @ bread
    return OlsDiagnostics(
        residuals=residuals,
        std_errors=np.sqrt(np.clip(np.diag(covariance), 0.0, None)),
        rank=int(np.linalg.matrix_rank(x)),
    )
