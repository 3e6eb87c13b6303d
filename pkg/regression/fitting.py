"""
Coordinate fitting on reused primal sample paths.

For every (period n, basis index i) the responses V_{n+1} * h_i(z_{n+1}) are
regressed on phi_{n,i}(x_n, a_n). Nothing is simulated here: the supplied
paths (the lower-bound paths) are the only data touched.
"""

import logging

import numpy as np

from basis.spec import BasisSpec
from config import settings
from errors import ArgumentError, DualBoundError, RegressionError
from infrastructure.parallel import parallel_map
from mdp.paths import PathBatch
from regression.ols import ols_solve
from regression.penalty_model import Coefficients, PenaltyModel
from regression.regressors import RegressorSpec

logger = logging.getLogger(__name__)


def coordinate_responses(paths: PathBatch, basis: BasisSpec) -> np.ndarray:
    """
    Responses V_{n+1} * h_i(z_{n+1}) for all paths, periods and indices.

    Returns:
        (M, N, size) array
    """
    weights = basis.response_weights(paths.noises)
    return paths.values[:, 1:, None] * weights


def fit_coordinates(
    paths: PathBatch,
    basis: BasisSpec,
    regressors: RegressorSpec,
    *,
    ridge: float | None = None,
    workers: int | None = None,
) -> PenaltyModel:
    """
    Fit theta_{n,i} by one least-squares regression per (n, i).

    Path weights (exact enumerations) are used as sample weights. Pairs
    without features keep beta = 0.

    Raises:
        ArgumentError: If there are no paths or horizons disagree
        RegressionError: Annotated with the period and index of the failure
    """
    if len(paths) == 0:
        raise ArgumentError("coordinate fitting needs at least one path")
    if paths.horizon != regressors.horizon:
        raise ArgumentError(
            f"paths have horizon {paths.horizon}, regressors {regressors.horizon}"
        )
    workers = settings.worker_threads if workers is None else workers
    responses = coordinate_responses(paths, basis)

    def fit(key: tuple[int, int]) -> np.ndarray:
        n, i = key
        if not regressors.features(n, i):
            return np.zeros(0)
        design = regressors.design(n, i, paths.states[:, n], paths.actions[:, n])
        try:
            return ols_solve(
                design,
                responses[:, n, i],
                weights=paths.weights,
                ridge=ridge,
                context=f"period {n}, index {i}",
            )
        except DualBoundError as e:
            raise RegressionError(f"regression at period {n}, index {i} failed: {e}", n, i) from e

    keys = [(n, i) for n in range(regressors.horizon) for i in range(basis.size)]
    fitted = parallel_map(fit, keys, workers)
    coefficients: Coefficients = dict(zip(keys, fitted, strict=True))

    logger.info(
        f"Fitted {sum(theta.size for theta in fitted)} coefficients over "
        f"{len(keys)} regressions from {len(paths)} paths ({basis.kind} basis)"
    )
    return PenaltyModel(basis=basis, regressors=regressors, coefficients=coefficients)
