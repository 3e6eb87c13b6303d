"""Finite-discrete noise: a table of atoms y_1..y_p with probabilities rho(y_i)."""

import itertools
import math
from collections.abc import Iterator
from dataclasses import dataclass, field

import numpy as np

from errors import ArgumentError
from providers.noise.base import NoiseKind

_PROBABILITY_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class FiniteNoise:
    """
    Noise taking finitely many values.

    Attributes:
        atoms: (p, d) array, row i is atom y_i
        probabilities: (p,) strictly positive probabilities summing to one
    """

    atoms: np.ndarray
    probabilities: np.ndarray
    _cumulative: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        atoms = np.asarray(self.atoms, dtype=np.float64)
        if atoms.ndim == 1:
            atoms = atoms[:, None]
        probabilities = np.asarray(self.probabilities, dtype=np.float64).ravel()

        if atoms.ndim != 2 or atoms.shape[0] == 0:
            raise ArgumentError("atoms must be a non-empty (p, d) table")
        if probabilities.shape != (atoms.shape[0],):
            raise ArgumentError(
                f"expected {atoms.shape[0]} probabilities, got {probabilities.shape[0]}"
            )
        if np.any(probabilities <= 0.0):
            raise ArgumentError("atom probabilities must be strictly positive")
        if abs(math.fsum(probabilities) - 1.0) > _PROBABILITY_TOLERANCE:
            raise ArgumentError(f"probabilities sum to {math.fsum(probabilities)}, not 1")
        if len({tuple(row) for row in atoms}) != atoms.shape[0]:
            raise ArgumentError("atoms must be distinct")

        cumulative = np.cumsum(probabilities)
        cumulative[-1] = 1.0
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "probabilities", probabilities)
        object.__setattr__(self, "_cumulative", cumulative)

    @classmethod
    def equiprobable(cls, values: list[float] | np.ndarray) -> "FiniteNoise":
        """Scalar noise uniform over the given values."""
        values = np.asarray(values, dtype=np.float64)
        return cls(atoms=values, probabilities=np.full(values.shape[0], 1.0 / values.shape[0]))

    @property
    def dimension(self) -> int:
        return int(self.atoms.shape[1])

    @property
    def kind(self) -> NoiseKind:
        return NoiseKind.FINITE

    @property
    def uniform_width(self) -> int:
        return 1

    @property
    def size(self) -> int:
        """Number of atoms p."""
        return int(self.atoms.shape[0])

    def from_uniforms(self, uniforms: np.ndarray) -> np.ndarray:
        index = np.searchsorted(self._cumulative, uniforms[..., 0], side="right")
        index = np.minimum(index, self.size - 1)
        return self.atoms[index]

    def raw_moment(self, order: int) -> np.ndarray:
        return np.asarray(self.probabilities @ self.atoms**order, dtype=np.float64)

    def atom_index(self, z: np.ndarray) -> np.ndarray:
        """
        Locate draws in the atom table.

        Args:
            z: Draws of shape (..., d)

        Returns:
            Integer indices of shape (...)

        Raises:
            ArgumentError: If a draw is not one of the atoms
        """
        z = np.asarray(z, dtype=np.float64)
        matches = np.all(z[..., None, :] == self.atoms, axis=-1)
        found = matches.any(axis=-1)
        if not np.all(found):
            bad = z[~found][0]
            raise ArgumentError(f"value {bad.tolist()} is outside the atom support")
        return np.asarray(matches.argmax(axis=-1))

    def enumerate_paths(self, horizon: int) -> Iterator[tuple[np.ndarray, float]]:
        """Yield every noise sequence of the given length with its probability."""
        for combo in itertools.product(range(self.size), repeat=horizon):
            index = np.asarray(combo, dtype=np.intp)
            yield self.atoms[index], math.prod(self.probabilities[i] for i in combo)
