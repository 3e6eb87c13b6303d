"""
Regressors for the trading penalty coordinates.

Built from the unconstrained value function J_{t+1}(x_t, f_hat) with
x_t = x_{t-1} + a_t and f_hat = (I - Phi) f_t:

- first-order index (1, k): {1, g_k} with g = A_xf,t+1' x_t + A_ff,t+1 f_hat
- second-order index (2, k): the constant diag(A_ff,t+1)_k

Every feature is affine in a_t. Features that vanish identically (all of
them once t + 1 = T, where A_xf and A_ff are zero) are dropped, and the final
period carries no features at all since its continuation value is constant.
"""

import numpy as np

from basis.spec import BasisKind, BasisSpec
from errors import ArgumentError
from lqc.problem import TradingSolution
from regression.regressors import INTERCEPT, Feature, RegressorSpec, constant_feature
from trading.model import TradingModel


def _gradient_feature(
    model: TradingModel, solution: TradingSolution, t: int, k: int
) -> Feature:
    D = model.num_securities
    decay = np.eye(model.num_factors) - model.Phi
    A_xf, A_ff = solution.A_xf(t + 1), solution.A_ff(t + 1)

    def gradient(states: np.ndarray, actions: np.ndarray) -> np.ndarray:
        positions = states[:, :D] + actions
        predicted = states[:, D:] @ decay.T
        return positions @ A_xf[:, k] + predicted @ A_ff[k]

    return Feature(name=f"dJ/df{k}", fn=gradient)


def penalty_regressors(
    model: TradingModel, solution: TradingSolution, basis: BasisSpec
) -> RegressorSpec:
    """
    Regressors for a componentwise Taylor basis of order 1 or 2 on the factor noise.

    Raises:
        ArgumentError: If the basis does not fit the trading noise
    """
    if basis.kind is not BasisKind.TAYLOR or basis.order not in (1, 2):
        raise ArgumentError("trading regressors need a Taylor basis of order 1 or 2")
    if basis.noise.dimension != model.num_factors:
        raise ArgumentError("basis noise must be the factor noise")
    T = model.horizon

    def build(n: int, i: int) -> tuple[Feature, ...]:
        t = n + 1
        if t >= T:
            return ()
        index = basis.indices[i]
        k = index.component
        structural = t + 1 < T
        if index.degree == 1:
            if not structural:
                return (INTERCEPT,)
            return (INTERCEPT, _gradient_feature(model, solution, t, k))
        if not structural:
            return ()
        return (constant_feature(f"diag(A_ff){k}", float(solution.A_ff(t + 1)[k, k])),)

    return RegressorSpec.build(T, basis.size, build)
