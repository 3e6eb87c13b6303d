"""
Taylor-series penalty basis.

Basis functions are centered monomials d_r(z) = z^r - E[z^r], r = 1..R, taken
componentwise for vector noise. The coordinate of V along d_r follows from the
linear system Cov(z, ..., z^R) gamma = E[V (z^r - E z^r)]_r, i.e. gamma = W c
with W the inverse monomial covariance. The weight functions
l_r(z) = (W d(z))_r turn that into plain regression responses V * l_r(z).
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from errors import ArgumentError, SingularSystemError
from providers.noise.base import NoiseModel

# Relative eigenvalue floor below which a monomial covariance is singular
SINGULARITY_TOLERANCE = 1e-12


def taylor_basis_eval(r: int, z: float | np.ndarray, moments: Sequence[float]) -> float | np.ndarray:
    """
    Evaluate d_r(z) = z^r - E[z^r].

    Args:
        r: Order index 1..R
        z: Noise value(s)
        moments: Raw moments (E z, E z^2, ..., E z^R)

    Raises:
        ArgumentError: If r is outside 1..R
    """
    if r < 1 or r > len(moments):
        raise ArgumentError(f"order index must be in 1..{len(moments)}, got {r}")
    return np.asarray(z, dtype=np.float64) ** r - moments[r - 1]


def monomial_covariance(moments: np.ndarray, order: int) -> np.ndarray:
    """
    Covariance of (z, z^2, ..., z^R) from raw moments.

    Args:
        moments: Raw moments indexed by power, moments[k] = E[z^k], k = 0..2R
        order: R
    """
    powers = np.arange(1, order + 1)
    return moments[powers[:, None] + powers[None, :]] - np.outer(moments[powers], moments[powers])


def _first_singular_monomial(cov: np.ndarray) -> int | None:
    scale = max(float(np.abs(cov).max()), np.finfo(float).tiny)
    for m in range(1, cov.shape[0] + 1):
        smallest = np.linalg.eigvalsh(cov[:m, :m])[0]
        if smallest <= SINGULARITY_TOLERANCE * scale:
            return m
    return None


@dataclass(frozen=True, eq=False)
class CoordinateWeights:
    """
    Inverse monomial covariances per noise component.

    Attributes:
        order: R
        moments: (2R+1, d) raw moments, row k holds E[z_k^k] per component
        covariances: (d, R, R) Cov(z, ..., z^R) per component
        matrices: (d, R, R) W = inverse covariance per component
    """

    order: int
    moments: np.ndarray
    covariances: np.ndarray
    matrices: np.ndarray

    @property
    def dimension(self) -> int:
        return int(self.matrices.shape[0])

    def centered_monomials(self, z: np.ndarray) -> np.ndarray:
        """d_r(z_k) for all r, k; shape (..., R, d)."""
        z = np.asarray(z, dtype=np.float64)
        powers = np.arange(1, self.order + 1)
        return z[..., None, :] ** powers[:, None] - self.moments[powers]

    def weight_functions(self, z: np.ndarray) -> np.ndarray:
        """l_r(z_k) = (W_k d(z_k))_r for all r, k; shape (..., R, d)."""
        centered = self.centered_monomials(z)
        return np.einsum("krs,...sk->...rk", self.matrices, centered)


def coordinate_weights(noise: NoiseModel, order: int) -> CoordinateWeights:
    """
    Build W = Cov(z, z^2, ..., z^R)^{-1} for every noise component.

    Raises:
        ArgumentError: If order < 1
        SingularSystemError: If some monomial z^m is affinely dependent on the
            lower ones (e.g. z^2 for two-point noise), naming that monomial
    """
    if order < 1:
        raise ArgumentError(f"Taylor order must be >= 1, got {order}")

    moments = np.stack([noise.raw_moment(k) for k in range(2 * order + 1)])
    covariances = np.empty((noise.dimension, order, order))
    matrices = np.empty_like(covariances)

    for k in range(noise.dimension):
        cov = monomial_covariance(moments[:, k], order)
        singular = _first_singular_monomial(cov)
        label = "z" if noise.dimension == 1 else f"z_{k}"
        if singular is not None:
            monomial = f"{label}^{singular}" if singular > 1 else label
            raise SingularSystemError(
                f"monomial covariance is singular: {monomial} is affinely dependent on "
                f"lower-order monomials of component {k}",
                monomial=monomial,
            )
        try:
            factor = cho_factor(cov, lower=True)
        except LinAlgError as e:
            raise SingularSystemError(
                f"monomial covariance of component {k} is not positive definite",
                monomial=label,
            ) from e
        inverse = cho_solve(factor, np.eye(order))
        covariances[k] = cov
        matrices[k] = 0.5 * (inverse + inverse.T)

    return CoordinateWeights(
        order=order, moments=moments, covariances=covariances, matrices=matrices
    )
