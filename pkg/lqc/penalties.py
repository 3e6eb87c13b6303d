"""
Closed-form dual penalties built from quadratic value functions.

The optimal penalty of an LQC problem is the martingale-difference sum of its
cost-to-go functions. With x_hat = A_n x_n + B_n a_n and z = z_{n+1}:

    M* = sum_n [ 2 x_hat'K_{n+1} z + z'K_{n+1} z - E z'K_{n+1} z ]

Penalties handed to the dual machinery use the reward convention, so the
adapters below return -M*.
"""

from collections.abc import Callable
from typing import TYPE_CHECKING

import numpy as np

from basis.spec import BasisKind, BasisSpec
from errors import ArgumentError
from lqc.problem import LqcSolution, TradingSolution
from regression.penalty_model import PenaltyModel
from regression.regressors import INTERCEPT, Feature, RegressorSpec

if TYPE_CHECKING:
    from trading.model import TradingModel

GradientFn = Callable[[int, np.ndarray], np.ndarray]
HessianFn = Callable[[int], np.ndarray]


def _predicted_states(solution: LqcSolution, states: np.ndarray, actions: np.ndarray) -> np.ndarray:
    """x_hat_{n+1} = A_n x_n + B_n a_n for every period, shape (B, N, ds)."""
    problem = solution.problem
    return np.einsum("nij,bnj->bni", problem.A, states[:, :-1]) + np.einsum(
        "nij,bnj->bni", problem.B, actions
    )


def lqc_exact_penalty(
    solution: LqcSolution, states: np.ndarray, actions: np.ndarray, noises: np.ndarray
) -> np.ndarray:
    """
    M* in the cost convention on a batch of trajectories.

    Args:
        states: (B, N+1, ds)
        actions: (B, N, da)
        noises: (B, N, ds)

    Returns:
        (B,) penalty values
    """
    covariance = solution.problem.covariance
    K_next = solution.K[1:]
    x_hat = _predicted_states(solution, states, actions)
    linear = 2.0 * np.einsum("bni,nij,bnj->b", x_hat, K_next, noises)
    quadratic = np.einsum("bni,nij,bnj->b", noises, K_next, noises)
    centering = sum(float(np.trace(covariance @ K)) for K in K_next)
    return linear + quadratic - centering


def taylor_penalty(
    gradient: GradientFn,
    hessian: HessianFn,
    covariance: np.ndarray,
    predicted: np.ndarray,
    noises: np.ndarray,
    order: int = 2,
) -> np.ndarray:
    """
    Penalty from Taylor coordinates of V_{n+1} around the predicted state.

        sum_n [ grad V_{n+1}(x_hat)'z + 1/2 (z'H_{n+1} z - tr(Cov H_{n+1})) ]

    The second-order term is dropped when order = 1.

    Args:
        gradient: (n, x_hat (B, ds)) -> (B, ds) gradient of V_{n+1}
        hessian: n -> (ds, ds) Hessian of V_{n+1}
        covariance: Noise covariance
        predicted: (B, N, ds) predicted states x_hat_{n+1}
        noises: (B, N, ds)
    """
    if order not in (1, 2):
        raise ArgumentError(f"Taylor penalty order must be 1 or 2, got {order}")
    total = np.zeros(noises.shape[0])
    for n in range(noises.shape[1]):
        z = noises[:, n]
        total += np.einsum("bi,bi->b", gradient(n, predicted[:, n]), z)
        if order == 2:
            H = hessian(n)
            total += 0.5 * (np.einsum("bi,ij,bj->b", z, H, z) - float(np.trace(covariance @ H)))
    return total


def lqc_taylor_penalty(
    solution: LqcSolution,
    states: np.ndarray,
    actions: np.ndarray,
    noises: np.ndarray,
    order: int = 2,
) -> np.ndarray:
    """Taylor penalty of the cost-to-go V_{n+1}(x) = x'K x + c (gradient 2Kx, Hessian 2K)."""
    K_next = solution.K[1:]
    return taylor_penalty(
        gradient=lambda n, x: 2.0 * x @ K_next[n].T,
        hessian=lambda n: 2.0 * K_next[n],
        covariance=solution.problem.covariance,
        predicted=_predicted_states(solution, states, actions),
        noises=noises,
        order=order,
    )


class LqcExactPenalty:
    """Optimal LQC penalty in the reward convention (-M*)."""

    affine_in_action = True

    def __init__(self, solution: LqcSolution):
        self.solution = solution

    def evaluate(self, states: np.ndarray, actions: np.ndarray, noises: np.ndarray) -> np.ndarray:
        return -lqc_exact_penalty(self.solution, states, actions, noises)

    def control_variate(
        self, states: np.ndarray, actions: np.ndarray, noises: np.ndarray
    ) -> np.ndarray:
        """-(z'K z - E z'K z) summed over periods; independent of actions."""
        del states, actions
        covariance = self.solution.problem.covariance
        K_next = self.solution.K[1:]
        quadratic = np.einsum("bni,nij,bnj->b", noises, K_next, noises)
        return -(quadratic - sum(float(np.trace(covariance @ K)) for K in K_next))


def _predicted_component(solution: LqcSolution, n: int, j: int) -> Feature:
    A, B = solution.problem.A[n], solution.problem.B[n]
    return Feature(
        name=f"x_hat{j}",
        fn=lambda states, actions: states @ A[j] + actions @ B[j],
    )


def lqc_penalty_model(solution: LqcSolution, basis: BasisSpec) -> PenaltyModel:
    """
    Optimal LQC coordinates written in a componentwise Taylor basis.

    beta_(1,k) = -2 (K_{n+1} x_hat)_k on the features x_hat_j, and
    beta_(2,k) = -K_{n+1,kk} on the intercept. Exact whenever the K_{n+1}
    are diagonal (always for scalar problems).

    Raises:
        ArgumentError: If the basis is not a Taylor basis of order <= 2 on the state noise
    """
    problem = solution.problem
    ds = problem.state_dim
    if basis.kind is not BasisKind.TAYLOR or basis.order > 2 or basis.noise.dimension != ds:
        raise ArgumentError("LQC coordinates need a Taylor basis of order <= 2 on the state noise")

    features = {
        n: tuple(_predicted_component(solution, n, j) for j in range(ds))
        for n in range(problem.horizon)
    }

    def build(n: int, i: int) -> tuple[Feature, ...]:
        degree = basis.indices[i].degree
        return features[n] if degree == 1 else (INTERCEPT,)

    regressors = RegressorSpec.build(problem.horizon, basis.size, build)
    coefficients: dict[tuple[int, int], np.ndarray] = {}
    for n in range(problem.horizon):
        K_next = solution.K[n + 1]
        for i, index in enumerate(basis.indices):
            k = index.component
            if index.degree == 1:
                coefficients[(n, i)] = -2.0 * K_next[k].copy()
            else:
                coefficients[(n, i)] = np.array([-K_next[k, k]])
    return PenaltyModel(basis=basis, regressors=regressors, coefficients=coefficients)


class TradingValuePenalty:
    """
    Penalty from the unconstrained trading value function J_{t+1}, no regression.

    With x_t = x_{t-1} + a_t, f_hat = (I - Phi) f_t and z = z_{t+1}:

        sum_{t<T} [ (A_xf,t+1' x_t + A_ff,t+1 f_hat)'z + 1/2 (z'A_ff,t+1 z - tr(Psi A_ff,t+1)) ]
    """

    affine_in_action = True

    def __init__(self, model: "TradingModel", solution: TradingSolution):
        self.model = model
        self.solution = solution

    def _terms(
        self, states: np.ndarray, actions: np.ndarray, noises: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]:
        D = self.model.num_securities
        decay = np.eye(self.model.num_factors) - self.model.Phi
        linear = np.zeros(states.shape[0])
        quadratic = np.zeros(states.shape[0])
        for n in range(self.model.horizon - 1):
            t = n + 1
            positions = states[:, n, :D] + actions[:, n]
            predicted = states[:, n, D:] @ decay.T
            z = noises[:, n]
            A_ff = self.solution.A_ff(t + 1)
            gradient = self.solution.factor_gradient(t + 1, positions, predicted)
            linear += np.einsum("bk,bk->b", gradient, z)
            quadratic += 0.5 * (
                np.einsum("bi,ij,bj->b", z, A_ff, z) - float(np.trace(self.model.Psi @ A_ff))
            )
        return linear, quadratic

    def evaluate(self, states: np.ndarray, actions: np.ndarray, noises: np.ndarray) -> np.ndarray:
        linear, quadratic = self._terms(states, actions, noises)
        return linear + quadratic

    def control_variate(
        self, states: np.ndarray, actions: np.ndarray, noises: np.ndarray
    ) -> np.ndarray:
        return self._terms(states, actions, noises)[1]
