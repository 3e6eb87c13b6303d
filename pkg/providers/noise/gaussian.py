"""Zero-mean Gaussian noise with a given covariance."""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, cholesky, eigh, solve_triangular

from errors import ArgumentError
from infrastructure.streams import standard_normals
from providers.noise.base import NoiseKind

logger = logging.getLogger(__name__)

_PSD_FLOOR = -1e-10


def _double_factorial(k: int) -> int:
    result = 1
    while k > 1:
        result *= k
        k -= 2
    return result


@dataclass(frozen=True, eq=False)
class GaussianNoise:
    """
    z ~ N(0, covariance), drawn as z = F w with w standard normal.

    F is the diagonal square root for diagonal covariances, the lower Cholesky
    factor otherwise, and an eigen-decomposition square root for singular
    (semi-definite) covariances.

    Attributes:
        covariance: (d, d) symmetric positive semi-definite matrix
    """

    covariance: np.ndarray
    _factor: np.ndarray = field(init=False, repr=False)
    _triangular: bool = field(init=False, repr=False)

    def __post_init__(self) -> None:
        cov = np.atleast_2d(np.asarray(self.covariance, dtype=np.float64))
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
            raise ArgumentError(f"covariance must be square, got shape {cov.shape}")
        if not np.allclose(cov, cov.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(cov).max())):
            raise ArgumentError("covariance must be symmetric")
        cov = 0.5 * (cov + cov.T)

        scale = max(1.0, float(np.abs(cov).max()))
        eigenvalues = np.linalg.eigvalsh(cov)
        if eigenvalues[0] < _PSD_FLOOR * scale:
            raise ArgumentError(
                f"covariance is not positive semi-definite (min eigenvalue {eigenvalues[0]:.3e})"
            )

        triangular = True
        if np.count_nonzero(cov - np.diag(np.diag(cov))) == 0:
            factor = np.diag(np.sqrt(np.diag(cov)))
        else:
            try:
                factor = cholesky(cov, lower=True)
            except LinAlgError:
                logger.debug("Covariance is singular; using eigen-decomposition square root")
                values, vectors = eigh(cov)
                factor = vectors * np.sqrt(np.clip(values, 0.0, None))
                triangular = False

        object.__setattr__(self, "covariance", cov)
        object.__setattr__(self, "_factor", factor)
        object.__setattr__(self, "_triangular", triangular)

    @classmethod
    def standard(cls, dimension: int = 1) -> "GaussianNoise":
        """Independent standard normal components."""
        return cls(covariance=np.eye(dimension))

    @classmethod
    def diagonal(cls, variances: list[float] | np.ndarray) -> "GaussianNoise":
        """Independent components with the given variances."""
        return cls(covariance=np.diag(np.asarray(variances, dtype=np.float64)))

    @property
    def dimension(self) -> int:
        return int(self.covariance.shape[0])

    @property
    def kind(self) -> NoiseKind:
        return NoiseKind.GAUSSIAN

    @property
    def uniform_width(self) -> int:
        return self.dimension

    @property
    def factor(self) -> np.ndarray:
        """Square-root factor F with F F^T = covariance."""
        return self._factor

    @property
    def variances(self) -> np.ndarray:
        return np.diag(self.covariance).copy()

    def from_uniforms(self, uniforms: np.ndarray) -> np.ndarray:
        return standard_normals(uniforms) @ self._factor.T

    def raw_moment(self, order: int) -> np.ndarray:
        if order < 0:
            raise ArgumentError(f"moment order must be non-negative, got {order}")
        if order % 2 == 1:
            return np.zeros(self.dimension)
        return self.variances ** (order // 2) * float(_double_factorial(order - 1))

    def whiten(self, z: np.ndarray) -> np.ndarray:
        """
        Map draws back to independent standard normals w with z = F w.

        Raises:
            ArgumentError: If the covariance is singular
        """
        diagonal = np.diag(self._factor)
        if not self._triangular or np.any(diagonal <= 0.0):
            raise ArgumentError("cannot whiten noise with a singular covariance")
        z = np.asarray(z, dtype=np.float64)
        flat = z.reshape(-1, self.dimension)
        w = solve_triangular(self._factor, flat.T, lower=True).T
        return w.reshape(z.shape)
