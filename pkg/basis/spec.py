"""
Penalty basis specifications.

A BasisSpec fixes the zero-mean functions b_i spanning the penalty space and
the response weights h_i used to regress coordinates:

- taylor:    b_(r,k) = z_k^r - E z_k^r,  h_(r,k) = l_r(z_k) (coordinate weights)
- hermite:   b_(i,k) = e_i(w_k),          h = b (orthonormal), w whitened noise
- indicator: b_i = g_i - sqrt(rho_i),     h_i = g_i

Vector noise is handled componentwise; cross-component terms are not built.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from basis.hermite import DEFAULT_HERMITE_ORDER, hermite_matrix
from basis.indicator import indicator_matrix
from basis.taylor import CoordinateWeights, coordinate_weights
from errors import ArgumentError
from providers.noise.base import NoiseKind, NoiseModel
from providers.noise.finite_discrete import FiniteNoise
from providers.noise.gaussian import GaussianNoise


class BasisKind(str, Enum):
    """Families of penalty basis functions."""

    TAYLOR = "taylor"
    HERMITE = "hermite"
    INDICATOR = "indicator"

    def __str__(self) -> str:
        """Return the value for string representation."""
        return self.value


@dataclass(frozen=True)
class BasisIndex:
    """
    One member of the index set I.

    Attributes:
        degree: r for taylor, i for hermite, atom index for indicator
        component: Noise component k (0 for indicator)
    """

    degree: int
    component: int

    @property
    def label(self) -> str:
        return f"{self.degree}:{self.component}"


@dataclass(frozen=True, eq=False)
class BasisSpec:
    """
    Penalty basis with its index set and response weights.

    Attributes:
        kind: Basis family
        order: R (taylor), P (hermite) or atom count p (indicator)
        noise: Noise measure the basis is centered under
        weights: Coordinate weights (taylor only)
    """

    kind: BasisKind
    order: int
    noise: NoiseModel
    weights: CoordinateWeights | None = None

    @classmethod
    def taylor(cls, noise: NoiseModel, order: int = 2) -> "BasisSpec":
        """Centered monomials up to z^order (raises SingularSystemError if degenerate)."""
        return cls(BasisKind.TAYLOR, order, noise, coordinate_weights(noise, order))

    @classmethod
    def hermite(cls, noise: NoiseModel, order: int = DEFAULT_HERMITE_ORDER) -> "BasisSpec":
        """Normalized Hermite polynomials of the whitened Gaussian noise."""
        if not isinstance(noise, GaussianNoise):
            raise ArgumentError("the Hermite basis requires Gaussian noise")
        if order < 1:
            raise ArgumentError(f"Hermite order must be >= 1, got {order}")
        return cls(BasisKind.HERMITE, order, noise)

    @classmethod
    def indicator(cls, noise: NoiseModel) -> "BasisSpec":
        """Centered scaled indicators of every atom."""
        if not isinstance(noise, FiniteNoise):
            raise ArgumentError("the indicator basis requires finite-discrete noise")
        return cls(BasisKind.INDICATOR, noise.size, noise)

    @property
    def indices(self) -> tuple[BasisIndex, ...]:
        if self.kind is BasisKind.INDICATOR:
            return tuple(BasisIndex(i, 0) for i in range(self.order))
        return tuple(
            BasisIndex(r, k)
            for r in range(1, self.order + 1)
            for k in range(self.noise.dimension)
        )

    @property
    def size(self) -> int:
        if self.kind is BasisKind.INDICATOR:
            return self.order
        return self.order * self.noise.dimension

    def position(self, degree: int, component: int = 0) -> int:
        """Flat position of index (degree, component)."""
        if self.kind is BasisKind.INDICATOR:
            return degree
        return (degree - 1) * self.noise.dimension + component

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        """
        b_i(z) for every index.

        Args:
            z: Draws of shape (..., d)

        Returns:
            Array of shape (..., size)
        """
        z = np.asarray(z, dtype=np.float64)
        lead = z.shape[:-1]
        if self.kind is BasisKind.TAYLOR:
            assert self.weights is not None
            return self.weights.centered_monomials(z).reshape(*lead, self.size)
        if self.kind is BasisKind.HERMITE:
            return self._hermite(z)
        noise = self._finite()
        return indicator_matrix(z, noise) - np.sqrt(noise.probabilities)

    def response_weights(self, z: np.ndarray) -> np.ndarray:
        """
        h_i(z) for every index, so that E[V h_i(z)] is the coordinate of V along b_i.

        Returns:
            Array of shape (..., size)
        """
        z = np.asarray(z, dtype=np.float64)
        lead = z.shape[:-1]
        if self.kind is BasisKind.TAYLOR:
            assert self.weights is not None
            return self.weights.weight_functions(z).reshape(*lead, self.size)
        if self.kind is BasisKind.HERMITE:
            return self._hermite(z)
        return indicator_matrix(z, self._finite())

    def _hermite(self, z: np.ndarray) -> np.ndarray:
        noise = self.noise
        if not isinstance(noise, GaussianNoise):
            raise ArgumentError("the Hermite basis requires Gaussian noise")
        w = noise.whiten(z)
        values = hermite_matrix(w, self.order)  # (..., d, P)
        values = np.swapaxes(values, -1, -2)  # (..., P, d)
        return values.reshape(*z.shape[:-1], self.size)

    def _finite(self) -> FiniteNoise:
        noise = self.noise
        if noise.kind is not NoiseKind.FINITE or not isinstance(noise, FiniteNoise):
            raise ArgumentError("the indicator basis requires finite-discrete noise")
        return noise
