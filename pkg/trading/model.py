"""
Dynamic trading with predictable returns and quadratic trading costs.

An investor liquidates x_0 shares of D securities over T periods. Returns are
predicted by K = 2 mean-reverting factors,

    f_{t+1} = (I - Phi) f_t + z_{t+1},   z ~ N(0, Psi),

and each trade a_t costs 1/2 a_t'Lambda a_t. Only the factor noise affects
the objective; the return noise covariance Sigma enters through the
risk-aversion term alone, and the risk-free drift mu is carried but inert.
"""

from dataclasses import dataclass
from typing import Any

import numpy as np

from errors import ArgumentError
from providers.noise.gaussian import GaussianNoise

NUM_FACTORS = 2
DEFAULT_LAMBDA = 2.14e-5
DEFAULT_POSITION = 10_000.0
FACTOR_LOADINGS = (0.3375, -0.0720)
RETURN_VARIANCE = 0.048
FACTOR_VARIANCES = (0.0379, 0.0947)
INITIAL_FACTORS = (1.0, 1.0)

PHI_PRESETS: dict[str, tuple[float, float]] = {
    "base": (0.5, 0.7),
    "phi1": (0.3, 0.5),
    "phi2": (0.3, 0.7),
    "phi3": (0.5, 0.3),
    "phi4": (0.7, 0.5),
}

LAMBDA_PRESETS: dict[str, float] = {
    "base": DEFAULT_LAMBDA,
    "lambda1": 1.07e-5,
    "lambda2": 2.67e-5,
    "lambda3": 3.21e-5,
    "lambda4": 4.28e-5,
}

OVERRIDABLE_FIELDS = frozenset({"B", "Psi", "Sigma", "x0", "f0", "mu"})


@dataclass(frozen=True, eq=False)
class TradingModel:
    """
    Calibrated trading problem.

    Attributes:
        num_securities: D
        horizon: T
        B: (D, K) factor loadings
        Phi: (K, K) mean reversion
        Psi: (K, K) factor-noise covariance
        Sigma: (D, D) return-noise covariance
        Gamma: (D, D) upper-triangular cost shape, Lambda = lam * Gamma Gamma'
        lam: Cost level lambda
        Lambda: (D, D) trading-cost matrix
        gamma: Risk aversion
        mu: Risk-free drift (unused by the objective)
        x0: (D,) initial position
        f0: (K,) initial factors
        f1: (K,) factors known at the first decision, (I - Phi) f0
    """

    num_securities: int
    horizon: int
    B: np.ndarray
    Phi: np.ndarray
    Psi: np.ndarray
    Sigma: np.ndarray
    Gamma: np.ndarray
    lam: float
    Lambda: np.ndarray
    gamma: float
    mu: float
    x0: np.ndarray
    f0: np.ndarray
    f1: np.ndarray

    @property
    def num_factors(self) -> int:
        return int(self.Phi.shape[0])

    @property
    def noise(self) -> GaussianNoise:
        return GaussianNoise(covariance=self.Psi)

    def reward(self, positions: np.ndarray, trades: np.ndarray, factors: np.ndarray) -> np.ndarray:
        """
        x_t'B f_t - 1/2 a_t'Lambda a_t - gamma/2 x_t'Sigma x_t on batches.

        Args:
            positions: (B, D) post-trade positions x_t
            trades: (B, D) trades a_t
            factors: (B, K) factors f_t
        """
        positions, trades, factors = (np.atleast_2d(v) for v in (positions, trades, factors))
        value = np.einsum("bi,ij,bj->b", positions, self.B, factors)
        value -= 0.5 * np.einsum("bi,ij,bj->b", trades, self.Lambda, trades)
        if self.gamma:
            value -= 0.5 * self.gamma * np.einsum("bi,ij,bj->b", positions, self.Sigma, positions)
        return value


def cost_shape(num_securities: int) -> np.ndarray:
    """Upper-triangular Gamma whose row d holds 1/sqrt(D - d) from column d on (0-indexed)."""
    D = num_securities
    rows = 1.0 / np.sqrt(D - np.arange(D, dtype=np.float64))
    return np.triu(np.ones((D, D))) * rows[:, None]


def resolve_phi(phi: str | np.ndarray | list | None) -> np.ndarray:
    """Phi from a preset label, a diagonal or a full matrix."""
    if phi is None:
        phi = "base"
    if isinstance(phi, str):
        if phi not in PHI_PRESETS:
            raise ArgumentError(f"unknown Phi preset {phi!r}; expected one of {sorted(PHI_PRESETS)}")
        return np.diag(PHI_PRESETS[phi])
    matrix = np.asarray(phi, dtype=np.float64)
    if matrix.ndim == 1:
        matrix = np.diag(matrix)
    if matrix.shape != (NUM_FACTORS, NUM_FACTORS):
        raise ArgumentError(f"Phi must be {NUM_FACTORS}x{NUM_FACTORS}, got {matrix.shape}")
    return matrix


def resolve_lambda(lam: str | float | None) -> float:
    """Lambda from a preset label or a number."""
    if lam is None:
        return DEFAULT_LAMBDA
    if isinstance(lam, str):
        if lam not in LAMBDA_PRESETS:
            raise ArgumentError(
                f"unknown lambda preset {lam!r}; expected one of {sorted(LAMBDA_PRESETS)}"
            )
        return LAMBDA_PRESETS[lam]
    return float(lam)


def _psd(matrix: np.ndarray, name: str) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim == 1:
        matrix = np.diag(matrix)
    if matrix.shape[0] != matrix.shape[1] or not np.allclose(matrix, matrix.T):
        raise ArgumentError(f"{name} must be a symmetric matrix")
    if np.linalg.eigvalsh(matrix)[0] < -1e-12 * max(1.0, float(np.abs(matrix).max())):
        raise ArgumentError(f"{name} must be positive semi-definite")
    return matrix


def build_model(
    D: int,
    T: int,
    lam: str | float | None = None,
    phi: str | np.ndarray | list | None = None,
    gamma: float = 0.0,
    overrides: dict[str, Any] | None = None,
) -> TradingModel:
    """
    Build the calibrated trading model.

    Args:
        D: Number of securities (>= 1)
        T: Number of trading periods (>= 1)
        lam: Cost level or preset label (default 2.14e-5)
        phi: Mean-reversion matrix, diagonal or preset label (default diag(0.5, 0.7))
        gamma: Risk aversion (0 is risk neutral)
        overrides: Replacement values for B, Psi, Sigma, x0, f0 or mu

    Raises:
        ArgumentError: On invalid sizes, lambda <= 0, x0 <= 0 or non-PSD overrides
    """
    if D < 1 or T < 1:
        raise ArgumentError(f"need D >= 1 and T >= 1, got D={D}, T={T}")
    lam_value = resolve_lambda(lam)
    if not lam_value > 0.0:
        raise ArgumentError(f"lambda must be positive, got {lam_value}")
    if gamma < 0.0:
        raise ArgumentError(f"risk aversion must be non-negative, got {gamma}")
    overrides = dict(overrides or {})
    unknown = set(overrides) - OVERRIDABLE_FIELDS
    if unknown:
        raise ArgumentError(f"unknown overrides: {sorted(unknown)}")

    K = NUM_FACTORS
    Phi = resolve_phi(phi)
    B = np.asarray(overrides.get("B", np.tile(FACTOR_LOADINGS, (D, 1))), dtype=np.float64)
    if B.shape != (D, K):
        raise ArgumentError(f"B must be {D}x{K}, got {B.shape}")
    Psi = _psd(overrides.get("Psi", np.diag(FACTOR_VARIANCES)), "Psi")
    if Psi.shape != (K, K) or np.count_nonzero(Psi - np.diag(np.diag(Psi))):
        raise ArgumentError("Psi must be a diagonal 2x2 covariance")
    Sigma = _psd(overrides.get("Sigma", RETURN_VARIANCE * np.eye(D)), "Sigma")
    if Sigma.shape != (D, D):
        raise ArgumentError(f"Sigma must be {D}x{D}, got {Sigma.shape}")
    x0 = np.broadcast_to(
        np.asarray(overrides.get("x0", DEFAULT_POSITION), dtype=np.float64), (D,)
    ).copy()
    if not np.all(x0 > 0.0):
        raise ArgumentError(f"initial positions must be positive, got {x0.tolist()}")
    f0 = np.asarray(overrides.get("f0", INITIAL_FACTORS), dtype=np.float64).reshape(K)

    Gamma = cost_shape(D)
    return TradingModel(
        num_securities=D,
        horizon=T,
        B=B,
        Phi=Phi,
        Psi=Psi,
        Sigma=Sigma,
        Gamma=Gamma,
        lam=lam_value,
        Lambda=lam_value * (Gamma @ Gamma.T),
        gamma=float(gamma),
        mu=float(overrides.get("mu", 0.0)),
        x0=x0,
        f0=f0,
        f1=(np.eye(K) - Phi) @ f0,
    )
