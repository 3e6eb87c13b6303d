"""
Scaled indicator basis of a finite-discrete noise.

g_i(y) = 1/sqrt(rho(y_i)) if y = y_i else 0 is orthonormal in L^2(rho). The
family contains the constant direction (sum_i sqrt(rho_i) g_i = 1), so the
penalty basis removes it from every member: b_i = g_i - E[g_i] = g_i - sqrt(rho_i).
"""

import numpy as np

from errors import ArgumentError
from providers.noise.finite_discrete import FiniteNoise


def indicator_eval(i: int, y: float | np.ndarray, table: FiniteNoise) -> float:
    """
    Evaluate g_i at a single atom.

    Raises:
        ArgumentError: If i is not an atom index or y is outside the support
    """
    if i < 0 or i >= table.size:
        raise ArgumentError(f"atom index must be in 0..{table.size - 1}, got {i}")
    point = np.atleast_1d(np.asarray(y, dtype=np.float64))
    located = int(table.atom_index(point))
    if located != i:
        return 0.0
    return float(1.0 / np.sqrt(table.probabilities[i]))


def indicator_matrix(z: np.ndarray, table: FiniteNoise) -> np.ndarray:
    """
    g_1..g_p at every draw.

    Args:
        z: Draws of shape (..., d)

    Returns:
        Array of shape (..., p)
    """
    index = table.atom_index(z)
    scale = 1.0 / np.sqrt(table.probabilities)
    out = np.zeros((*index.shape, table.size))
    np.put_along_axis(out, index[..., None], scale[index][..., None], axis=-1)
    return out
