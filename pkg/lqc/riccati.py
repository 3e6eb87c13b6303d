"""Backward Riccati recursion of the generic LQC problem."""

import logging

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from errors import SingularSystemError
from lqc.problem import LqcProblem, LqcSolution

logger = logging.getLogger(__name__)


def solve_riccati(problem: LqcProblem) -> LqcSolution:
    """
    Solve K_N = Q_N and, for n = N-1..0,

        L_n = -(B'K_{n+1}B + R)^-1 B'K_{n+1}A
        K_n = Q + A'K_{n+1}A + A'K_{n+1}B L_n

    Raises:
        SingularSystemError: If B'K_{n+1}B + R is not positive definite at period n
    """
    N, ds, da = problem.horizon, problem.state_dim, problem.action_dim
    covariance = problem.covariance

    K = np.empty((N + 1, ds, ds))
    L = np.empty((N, da, ds))
    offsets = np.zeros(N + 1)
    K[N] = problem.Q_terminal

    for n in range(N - 1, -1, -1):
        A, B, Q, R = problem.A[n], problem.B[n], problem.Q[n], problem.R[n]
        next_K = K[n + 1]
        gram = B.T @ next_K @ B + R
        try:
            factor = cho_factor(0.5 * (gram + gram.T), lower=True)
        except LinAlgError as e:
            raise SingularSystemError(
                f"B'K B + R is singular at period {n}", period=n
            ) from e
        L[n] = -cho_solve(factor, B.T @ next_K @ A)
        current = Q + A.T @ next_K @ A + A.T @ next_K @ B @ L[n]
        K[n] = 0.5 * (current + current.T)
        offsets[n] = offsets[n + 1] + float(np.trace(covariance @ next_K))

    logger.debug(f"Riccati recursion solved over {N} periods")
    return LqcSolution(problem=problem, K=K, L=L, offsets=offsets)
