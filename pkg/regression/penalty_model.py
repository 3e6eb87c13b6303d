"""
Regression-based dual penalties.

    penalty(a, z) = sum_n sum_i beta_{n,i}(x_n, a_n) b_i(z_{n+1}),
    beta_{n,i}(x, a) = phi_{n,i}(x, a)' theta_{n,i}

Each b_i has zero mean and beta_{n,i} only reads period-n information, so the
penalty has zero conditional mean under every non-anticipative policy,
whatever the coefficient values are.
"""

from dataclasses import dataclass, replace

import numpy as np

from basis.spec import BasisSpec
from errors import ArgumentError
from regression.regressors import RegressorSpec

Coefficients = dict[tuple[int, int], np.ndarray]


@dataclass(frozen=True, eq=False)
class PenaltyModel:
    """
    Fitted coordinates of a penalty in a zero-mean basis.

    Attributes:
        basis: Basis functions b_i
        regressors: Regressor set phi_{n,i}
        coefficients: theta_{n,i}, one vector per (n, i) sized like its features
    """

    basis: BasisSpec
    regressors: RegressorSpec
    coefficients: Coefficients

    def __post_init__(self) -> None:
        if self.basis.size != self.regressors.size:
            raise ArgumentError(
                f"basis has {self.basis.size} functions but regressors cover {self.regressors.size}"
            )
        for (n, i), theta in self.coefficients.items():
            expected = len(self.regressors.features(n, i))
            if np.shape(theta) != (expected,):
                raise ArgumentError(
                    f"coefficients at ({n}, {i}) have shape {np.shape(theta)}, expected ({expected},)"
                )

    @classmethod
    def zero(cls, basis: BasisSpec, regressors: RegressorSpec) -> "PenaltyModel":
        coefficients = {
            key: np.zeros(len(features)) for key, features in regressors.table.items()
        }
        return cls(basis=basis, regressors=regressors, coefficients=coefficients)

    @property
    def horizon(self) -> int:
        return self.regressors.horizon

    @property
    def affine_in_action(self) -> bool:
        return self.regressors.affine_in_action

    def theta(self, n: int, i: int) -> np.ndarray:
        return self.coefficients.get((n, i), np.zeros(0))

    def coordinates(
        self, n: int, states: np.ndarray, actions: np.ndarray, *, constant_only: bool = False
    ) -> np.ndarray:
        """
        beta_{n,i}(x_n, a_n) for every basis index.

        Args:
            constant_only: Keep only the contribution of constant features

        Returns:
            (B, size) array
        """
        out = np.zeros((states.shape[0], self.basis.size))
        for i in range(self.basis.size):
            theta = self.theta(n, i)
            if theta.size == 0:
                continue
            design = self.regressors.design(n, i, states, actions)
            if constant_only:
                theta = np.where(self.regressors.constant_mask(n, i), theta, 0.0)
            out[:, i] = design @ theta
        return out

    def _sum(
        self, states: np.ndarray, actions: np.ndarray, noises: np.ndarray, constant_only: bool
    ) -> np.ndarray:
        if states.ndim != 3 or actions.ndim != 3 or noises.ndim != 3:
            raise ArgumentError("penalties are evaluated on (B, periods, dim) trajectories")
        basis_values = self.basis.evaluate(noises)  # (B, N, size)
        total = np.zeros(states.shape[0])
        for n in range(self.horizon):
            beta = self.coordinates(n, states[:, n], actions[:, n], constant_only=constant_only)
            total += np.einsum("bi,bi->b", beta, basis_values[:, n])
        return total

    def evaluate(self, states: np.ndarray, actions: np.ndarray, noises: np.ndarray) -> np.ndarray:
        """
        Penalty value of each trajectory.

        Args:
            states: (B, N+1, state_dim)
            actions: (B, N, action_dim)
            noises: (B, N, noise_dim), row n holding z_{n+1}

        Returns:
            (B,) penalty values
        """
        return self._sum(states, actions, noises, constant_only=False)

    def control_variate(
        self, states: np.ndarray, actions: np.ndarray, noises: np.ndarray
    ) -> np.ndarray:
        """Part of the penalty carried by constant features (independent of actions)."""
        return self._sum(states, actions, noises, constant_only=True)

    def with_coefficients(self, coefficients: Coefficients) -> "PenaltyModel":
        return replace(self, coefficients=coefficients)

    def perturbed(self, scale: float, rng: np.random.Generator) -> "PenaltyModel":
        """Copy with Gaussian noise of the given scale added to every coefficient."""
        return self.with_coefficients(
            {
                key: theta + scale * rng.standard_normal(theta.shape)
                for key, theta in self.coefficients.items()
            }
        )
