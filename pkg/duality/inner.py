"""
Pathwise inner problems of the dual.

For a fixed noise path the inner problem is max_a [ sum of rewards - penalty ].
Models with quadratic rewards and polyhedral constraints give a convex QP as
long as the penalty is affine in the actions; finite-action models are solved
by trying every action sequence.
"""

import logging
from dataclasses import dataclass

import numpy as np

from duality.penalties import Penalty
from errors import ArgumentError, NonAffinePenaltyError
from mdp.base import MdpModel, QuadraticInnerModel
from mdp.finite import FiniteActionMdp
from solvers.problem import QpProblem, QpStatus
from solvers.qp import solve_qp

logger = logging.getLogger(__name__)

AFFINITY_TOLERANCE = 1e-7
AFFINITY_SEED = 20_240_611


@dataclass(frozen=True, eq=False)
class InnerProblem:
    """
    One pathwise inner problem in QP form.

    The QP minimizes -(sum of rewards - penalty) + control_variate over the
    stacked actions; the inner value is -(QP value) - control_variate.

    Attributes:
        noises: (N, noise_dim) fixed noise path
        qp: The QP with the action-dependent penalty folded in
        control_variate: Action-independent penalty part, kept out of the QP
        action_shape: (N, action_dim)
    """

    noises: np.ndarray
    qp: QpProblem
    control_variate: float
    action_shape: tuple[int, int]


@dataclass(frozen=True, eq=False)
class InnerSolution:
    """
    Optimum of an inner problem.

    Attributes:
        value: max_a [sum of rewards - penalty]
        actions: (N, action_dim) maximizing action sequence
        control_variate: Action-independent penalty part included in value
        status: Solver status
        iterations: Solver iterations (0 for enumeration)
    """

    value: float
    actions: np.ndarray
    control_variate: float
    status: QpStatus
    iterations: int = 0


def _penalty_batch(
    model: MdpModel, penalty: Penalty, actions: np.ndarray, noises: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    batch_noises = np.broadcast_to(noises, (actions.shape[0], *noises.shape))
    states = model.rollout(actions, batch_noises)
    return (
        np.asarray(penalty.evaluate(states, actions, batch_noises), dtype=np.float64),
        np.asarray(penalty.control_variate(states, actions, batch_noises), dtype=np.float64),
    )


def linearize_penalty(
    model: MdpModel, penalty: Penalty, noises: np.ndarray
) -> tuple[np.ndarray, float, float]:
    """
    Write an affine penalty as g'u + c over the stacked actions u.

    The slope is a central difference from rollouts at u = 0 and u = +-h e_k
    with h = max(1, |x_0|). Affinity is confirmed twice: the second difference
    along every e_k must vanish, and the affine prediction must hold at a fixed
    mixed direction, which exposes cross terms between coordinates.

    Returns:
        (g, c, control variate)

    Raises:
        NonAffinePenaltyError: If the penalty is not affine in the actions
    """
    if not penalty.affine_in_action:
        raise NonAffinePenaltyError(
            "QP inner problems need a penalty affine in actions; "
            "build it from regressors that are affine in the action"
        )
    N, da = model.horizon, model.action_dim
    size = N * da
    step = max(1.0, float(np.abs(model.initial_state()).max(initial=0.0)))
    mixed = np.random.default_rng(AFFINITY_SEED).uniform(-1.0, 1.0, size)

    points = np.vstack(
        [np.zeros(size), step * np.eye(size), -step * np.eye(size), step * mixed]
    )
    values, variates = _penalty_batch(model, penalty, points.reshape(-1, N, da), noises)
    base = float(values[0])
    up, down = values[1 : size + 1], values[size + 1 : 2 * size + 1]
    slope = (up - down) / (2.0 * step)

    curvature = float(np.abs(up + down - 2.0 * base).max(initial=0.0))
    cross = abs(float(values[-1]) - (base + step * float(slope @ mixed)))
    scale = max(1.0, float(np.abs(values).max()), step * float(np.abs(slope).sum()))
    deviation = max(curvature, cross)
    if deviation > AFFINITY_TOLERANCE * scale:
        raise NonAffinePenaltyError(
            f"penalty is not affine in actions (deviation {deviation:.3e}, scale {scale:.3e})"
        )
    return slope, base, float(variates[0])


def build_inner_problem(
    model: MdpModel, noises: np.ndarray, penalty: Penalty
) -> InnerProblem:
    """
    Assemble the inner QP of one noise path.

    Raises:
        ArgumentError: If the model does not expose a quadratic inner form
        NonAffinePenaltyError: If the penalty is not affine in actions
    """
    if not isinstance(model, QuadraticInnerModel):
        raise ArgumentError(f"{type(model).__name__} has no quadratic inner form")
    noises = np.asarray(noises, dtype=np.float64)
    P, q, c0 = model.inner_objective(noises)
    G, h, A_eq, b_eq = model.inner_constraints()
    slope, offset, variate = linearize_penalty(model, penalty, noises)
    qp = QpProblem(P=P, q=q + slope, G=G, h=h, A=A_eq, b=b_eq, c0=c0 + offset - variate)
    return InnerProblem(
        noises=noises,
        qp=qp,
        control_variate=variate,
        action_shape=(model.horizon, model.action_dim),
    )


def solve_inner_problem(
    problem: InnerProblem,
    tol: float | None = None,
    max_iter: int | None = None,
    warm_start: np.ndarray | None = None,
) -> InnerSolution:
    """Solve the inner QP and report the value in the reward convention."""
    solution = solve_qp(problem.qp, tol, max_iter, warm_start=warm_start)
    return InnerSolution(
        value=-solution.value - problem.control_variate,
        actions=solution.x.reshape(problem.action_shape),
        control_variate=problem.control_variate,
        status=solution.status,
        iterations=solution.iterations,
    )


def solve_inner_by_enumeration(
    model: FiniteActionMdp, noises: np.ndarray, penalty: Penalty
) -> InnerSolution:
    """Maximize over every action sequence of a finite-action model (first maximizer wins)."""
    noises = np.asarray(noises, dtype=np.float64)
    sequences = model.action_sequences()
    batch_noises = np.broadcast_to(noises, (sequences.shape[0], *noises.shape))
    states = model.rollout(sequences, batch_noises)
    penalties = penalty.evaluate(states, sequences, batch_noises)
    objective = model.total_reward(states, sequences) - penalties
    best = int(np.argmax(objective))
    variate = penalty.control_variate(states[best : best + 1], sequences[best : best + 1], batch_noises[:1])
    return InnerSolution(
        value=float(objective[best]),
        actions=sequences[best].copy(),
        control_variate=float(variate[0]),
        status=QpStatus.OPTIMAL,
    )


def inner_value(
    model: MdpModel,
    noises: np.ndarray,
    penalty: Penalty,
    tol: float | None = None,
    max_iter: int | None = None,
    warm_start: np.ndarray | None = None,
) -> InnerSolution:
    """Solve one inner problem with the method the model supports."""
    if isinstance(model, FiniteActionMdp):
        return solve_inner_by_enumeration(model, noises, penalty)
    problem = build_inner_problem(model, noises, penalty)
    return solve_inner_problem(problem, tol, max_iter, warm_start)
