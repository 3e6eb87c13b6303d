"""Gauss-Hermite quadrature under the standard normal measure."""

from collections.abc import Callable

import numpy as np
from numpy.polynomial import hermite_e

DEFAULT_POINTS = 64


def normal_expectation(
    fn: Callable[[np.ndarray], np.ndarray], points: int = DEFAULT_POINTS
) -> np.ndarray:
    """
    E[fn(Z)] for Z ~ N(0, 1).

    fn receives the nodes as a (points,) array and may return (points,) or
    (points, m); the result is a scalar or an (m,) array. Exact for polynomial
    integrands up to degree 2 * points - 1.
    """
    nodes, weights = hermite_e.hermegauss(points)
    values = np.asarray(fn(nodes), dtype=np.float64)
    return np.tensordot(weights, values, axes=(0, 0)) / np.sqrt(2.0 * np.pi)
