"""
Linear-quadratic control problems and their closed-form solutions.

Generic form (cost convention, minimized):

    x_{n+1} = A_n x_n + B_n a_n + z_{n+1}
    cost    = sum_{n<N} (x_n'Q_n x_n + a_n'R_n a_n) + x_N'Q_N x_N

The optimal cost-to-go is V_n(x) = x'K_n x + c_n with
c_n = sum_{i=n}^{N-1} E[z'K_{i+1} z].
"""

from dataclasses import dataclass

import numpy as np

from errors import ArgumentError
from policies.base import LinearFeedbackPolicy
from providers.noise.base import NoiseModel
from providers.noise.finite_discrete import FiniteNoise
from providers.noise.gaussian import GaussianNoise

_PSD_FLOOR = 1e-10


def noise_covariance(noise: NoiseModel) -> np.ndarray:
    """
    Covariance of a zero-mean noise model.

    Raises:
        ArgumentError: If the noise has a non-zero mean or unknown type
    """
    if isinstance(noise, GaussianNoise):
        return noise.covariance.copy()
    if isinstance(noise, FiniteNoise):
        mean = noise.probabilities @ noise.atoms
        if np.abs(mean).max() > 1e-12:
            raise ArgumentError(f"LQC noise must have zero mean, got {mean.tolist()}")
        return (noise.atoms * noise.probabilities[:, None]).T @ noise.atoms
    raise ArgumentError(f"no covariance available for noise of kind {noise.kind}")


def _check_psd(matrix: np.ndarray, name: str) -> None:
    scale = max(1.0, float(np.abs(matrix).max(initial=0.0)))
    if np.abs(matrix - matrix.T).max(initial=0.0) > 1e-12 * scale:
        raise ArgumentError(f"{name} must be symmetric")
    if np.linalg.eigvalsh(matrix)[0] < -_PSD_FLOOR * scale:
        raise ArgumentError(f"{name} must be positive semi-definite")


def _stack(matrix: np.ndarray | list, horizon: int, name: str) -> np.ndarray:
    array = np.asarray(matrix, dtype=np.float64)
    if array.ndim == 0:
        array = array.reshape(1, 1)
    if array.ndim == 2:
        return np.broadcast_to(array, (horizon, *array.shape)).copy()
    if array.ndim == 3 and array.shape[0] == horizon:
        return array.copy()
    raise ArgumentError(f"{name} must be a matrix or one matrix per period, got {array.shape}")


@dataclass(frozen=True, eq=False)
class LqcProblem:
    """
    Finite-horizon LQC problem.

    Attributes:
        A: (N, ds, ds) state matrices
        B: (N, ds, da) input matrices
        Q: (N, ds, ds) state cost matrices
        R: (N, da, da) action cost matrices
        Q_terminal: (ds, ds) terminal cost Q_N
        noise: Zero-mean additive noise z_{n+1}
        initial_state: x_0
    """

    A: np.ndarray
    B: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    Q_terminal: np.ndarray
    noise: NoiseModel
    initial_state: np.ndarray

    @classmethod
    def create(
        cls,
        A: np.ndarray | list | float,
        B: np.ndarray | list | float,
        Q: np.ndarray | list | float,
        R: np.ndarray | list | float,
        Q_terminal: np.ndarray | list | float,
        noise: NoiseModel,
        horizon: int,
        initial_state: np.ndarray | list | float,
    ) -> "LqcProblem":
        """
        Build and validate a problem; constant matrices are repeated over periods.

        Raises:
            ArgumentError: On inconsistent dimensions or non-PSD costs
        """
        if horizon < 1:
            raise ArgumentError(f"horizon must be >= 1, got {horizon}")
        a = _stack(A, horizon, "A")
        b = _stack(B, horizon, "B")
        q = _stack(Q, horizon, "Q")
        r = _stack(R, horizon, "R")
        qn = np.atleast_2d(np.asarray(Q_terminal, dtype=np.float64))
        x0 = np.atleast_1d(np.asarray(initial_state, dtype=np.float64))

        ds, da = a.shape[1], b.shape[2]
        if a.shape[1:] != (ds, ds) or b.shape[1] != ds:
            raise ArgumentError(f"A {a.shape[1:]} and B {b.shape[1:]} are inconsistent")
        if q.shape[1:] != (ds, ds) or qn.shape != (ds, ds) or r.shape[1:] != (da, da):
            raise ArgumentError("cost matrices do not match the state and action dimensions")
        if noise.dimension != ds or x0.shape != (ds,):
            raise ArgumentError("noise and initial state must have the state dimension")
        for n in range(horizon):
            _check_psd(q[n], f"Q_{n}")
            _check_psd(r[n], f"R_{n}")
        _check_psd(qn, "Q_N")
        return cls(A=a, B=b, Q=q, R=r, Q_terminal=qn, noise=noise, initial_state=x0)

    @property
    def horizon(self) -> int:
        return int(self.A.shape[0])

    @property
    def state_dim(self) -> int:
        return int(self.A.shape[1])

    @property
    def action_dim(self) -> int:
        return int(self.B.shape[2])

    @property
    def covariance(self) -> np.ndarray:
        return noise_covariance(self.noise)


@dataclass(frozen=True, eq=False)
class LqcSolution:
    """
    Closed-form solution of an LqcProblem.

    Attributes:
        problem: The solved problem
        K: (N+1, ds, ds) cost-to-go matrices, K_N = Q_N
        L: (N, da, ds) optimal gains, alpha*_n(x) = L_n x
        offsets: (N+1,) c_n = sum_{i>=n} tr(Cov K_{i+1})
    """

    problem: LqcProblem
    K: np.ndarray
    L: np.ndarray
    offsets: np.ndarray

    def cost_to_go(self, n: int, states: np.ndarray) -> np.ndarray:
        """V_n(x) = x'K_n x + c_n on a (B, ds) batch."""
        states = np.atleast_2d(states)
        return np.einsum("bi,ij,bj->b", states, self.K[n], states) + self.offsets[n]

    def initial_value(self) -> float:
        """Optimal expected total reward (negated cost) from x_0."""
        x0 = self.problem.initial_state[None, :]
        return -float(self.cost_to_go(0, x0)[0])

    def policy(self) -> LinearFeedbackPolicy:
        return LinearFeedbackPolicy(self.L)


@dataclass(frozen=True, eq=False)
class TradingSolution:
    """
    Coefficients of the risk-neutral unconstrained trading value function

        J_t(x, f) = -1/2 x'A_xx,t x + x'A_xf,t f + 1/2 f'A_ff,t f + A_t,  t = 1..T.

    Arrays are stored with row t-1 holding period t.

    Attributes:
        xx: (T, D, D)
        xf: (T, D, K)
        ff: (T, K, K)
        constants: (T,)
        gain_x: (T, D, D) (Lambda + A_xx,t+1)^-1 Lambda; row T-1 unused
        gain_f: (T, D, K) (Lambda + A_xx,t+1)^-1 (B + A_xf,t+1 (I - Phi)); row T-1 unused
    """

    xx: np.ndarray
    xf: np.ndarray
    ff: np.ndarray
    constants: np.ndarray
    gain_x: np.ndarray
    gain_f: np.ndarray

    @property
    def horizon(self) -> int:
        return int(self.xx.shape[0])

    def _row(self, t: int) -> int:
        if not 1 <= t <= self.horizon:
            raise ArgumentError(f"period must be in 1..{self.horizon}, got {t}")
        return t - 1

    def A_xx(self, t: int) -> np.ndarray:
        return self.xx[self._row(t)]

    def A_xf(self, t: int) -> np.ndarray:
        return self.xf[self._row(t)]

    def A_ff(self, t: int) -> np.ndarray:
        return self.ff[self._row(t)]

    def A_const(self, t: int) -> float:
        return float(self.constants[self._row(t)])

    def value(self, t: int, x: np.ndarray, f: np.ndarray) -> np.ndarray:
        """J_t on batches x (B, D) and f (B, K)."""
        x, f = np.atleast_2d(x), np.atleast_2d(f)
        return (
            -0.5 * np.einsum("bi,ij,bj->b", x, self.A_xx(t), x)
            + np.einsum("bi,ij,bj->b", x, self.A_xf(t), f)
            + 0.5 * np.einsum("bi,ij,bj->b", f, self.A_ff(t), f)
            + self.A_const(t)
        )

    def factor_gradient(self, t: int, x: np.ndarray, f: np.ndarray) -> np.ndarray:
        """dJ_t/df = A_xf,t' x + A_ff,t f on batches, shape (B, K)."""
        return np.atleast_2d(x) @ self.A_xf(t) + np.atleast_2d(f) @ self.A_ff(t).T
