"""
Normalized probabilists' Hermite polynomials.

e_i(z) = He_i(z) / sqrt(i!) is orthonormal under the standard normal:
e_1 = z, e_2 = (z^2 - 1)/sqrt(2), e_3 = (z^3 - 3z)/sqrt(6), ...
The constant e_0 is never a penalty basis function, so indices start at 1.
"""

import math

import numpy as np
from numpy.polynomial import hermite_e

from errors import ArgumentError

DEFAULT_HERMITE_ORDER = 4


def _norms(order: int) -> np.ndarray:
    return np.sqrt(np.array([math.factorial(i) for i in range(order + 1)], dtype=np.float64))


def hermite_eval(
    i: int, z: float | np.ndarray, order: int = DEFAULT_HERMITE_ORDER
) -> float | np.ndarray:
    """
    Evaluate the i-th normalized Hermite polynomial.

    Raises:
        ArgumentError: If i = 0 (the constant) or i exceeds the implemented order
    """
    if i == 0:
        raise ArgumentError("e_0 is the constant function and is not a penalty basis function")
    if i < 0 or i > order:
        raise ArgumentError(f"Hermite index must be in 1..{order}, got {i}")
    coefficients = np.zeros(i + 1)
    coefficients[i] = 1.0
    return hermite_e.hermeval(np.asarray(z, dtype=np.float64), coefficients) / math.sqrt(
        math.factorial(i)
    )


def hermite_matrix(z: np.ndarray, order: int = DEFAULT_HERMITE_ORDER) -> np.ndarray:
    """
    e_1..e_P at every point.

    Returns:
        Array of shape (*z.shape, order)
    """
    if order < 1:
        raise ArgumentError(f"Hermite order must be >= 1, got {order}")
    vander = hermite_e.hermevander(np.asarray(z, dtype=np.float64), order)
    return vander[..., 1:] / _norms(order)[1:]
