"""
Value-function recursion of the unconstrained, risk-neutral trading problem.

    A_xx,T = Lambda,  A_xf,T = 0,  A_ff,T = 0,  A_T = 0
    M_t    = Lambda + A_xx,t+1,   C_t = B + A_xf,t+1 (I - Phi)
    A_xx,t = Lambda - Lambda M_t^-1 Lambda
    A_xf,t = Lambda M_t^-1 C_t
    A_ff,t = C_t' M_t^-1 C_t + (I - Phi)' A_ff,t+1 (I - Phi)
    A_t    = 1/2 tr(Psi A_ff,t+1) + A_t+1

and the optimal trade alpha*_t = M_t^-1 (Lambda x_{t-1} + C_t f_t) - x_{t-1}.
The constant carries the 1/2 of the quadratic factor term: for f ~ N(m, Psi),
E[1/2 f'A f] = 1/2 m'A m + 1/2 tr(Psi A).
"""

import logging
from typing import TYPE_CHECKING

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from errors import SingularSystemError
from lqc.problem import TradingSolution

if TYPE_CHECKING:
    from trading.model import TradingModel

logger = logging.getLogger(__name__)


def trading_value_recursion(model: "TradingModel") -> TradingSolution:
    """
    Run the backward recursion for t = T..1.

    The recursion is the risk-neutral one; risk aversion in the model is
    ignored here.

    Raises:
        SingularSystemError: If Lambda + A_xx,t+1 is not positive definite
    """
    T, D, K = model.horizon, model.num_securities, model.num_factors
    Lam, B, Psi = model.Lambda, model.B, model.Psi
    decay = np.eye(K) - model.Phi
    if model.gamma > 0.0:
        logger.debug("Risk aversion ignored by the risk-neutral value recursion")

    xx = np.empty((T, D, D))
    xf = np.zeros((T, D, K))
    ff = np.zeros((T, K, K))
    constants = np.zeros(T)
    gain_x = np.zeros((T, D, D))
    gain_f = np.zeros((T, D, K))
    xx[T - 1] = Lam

    for t in range(T - 1, 0, -1):
        row, nxt = t - 1, t
        M = Lam + xx[nxt]
        C = B + xf[nxt] @ decay
        try:
            factor = cho_factor(0.5 * (M + M.T), lower=True)
        except LinAlgError as e:
            raise SingularSystemError(
                f"Lambda + A_xx is singular at period {t}", period=t
            ) from e
        gain_x[row] = cho_solve(factor, Lam)
        gain_f[row] = cho_solve(factor, C)

        current_xx = Lam - Lam @ gain_x[row]
        xx[row] = 0.5 * (current_xx + current_xx.T)
        xf[row] = Lam @ gain_f[row]
        current_ff = C.T @ gain_f[row] + decay.T @ ff[nxt] @ decay
        ff[row] = 0.5 * (current_ff + current_ff.T)
        constants[row] = 0.5 * float(np.trace(Psi @ ff[nxt])) + constants[nxt]

    return TradingSolution(
        xx=xx, xf=xf, ff=ff, constants=constants, gain_x=gain_x, gain_f=gain_f
    )


def unconstrained_policy(
    t: int, positions: np.ndarray, factors: np.ndarray, solution: TradingSolution
) -> np.ndarray:
    """
    Optimal unconstrained trade alpha*_t on a batch.

    At t = T the position is liquidated, alpha*_T = -x_{T-1}.

    Args:
        t: Decision period 1..T
        positions: (B, D) x_{t-1}
        factors: (B, K) f_t
    """
    positions = np.atleast_2d(positions)
    if t == solution.horizon:
        return -positions
    row = t - 1
    factors = np.atleast_2d(factors)
    return positions @ solution.gain_x[row].T + factors @ solution.gain_f[row].T - positions
