"""
Upper bounds from penalized perfect-information problems.

UB = E[ max_a ( sum of rewards - penalty ) ] is estimated by solving the inner
problem on L noise paths from the UPPER substream. Every penalty of a run sees
the same L paths, so differences between penalties are not blurred by noise.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from config import settings
from duality.inner import InnerSolution, inner_value
from duality.penalties import Penalty
from errors import ArgumentError, InfeasibleInnerProblemError, UnconvergedInnerProblemError
from infrastructure.parallel import parallel_map
from infrastructure.streams import Stream
from mdp.base import MdpModel
from mdp.finite import FiniteActionMdp
from mdp.simulation import sample_noises
from models.bounds import BoundEstimate
from providers.noise.base import NoiseKind
from providers.noise.finite_discrete import FiniteNoise
from solvers.problem import QpStatus

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class UpperBoundResult:
    """
    Upper-bound estimate with its pathwise detail.

    Attributes:
        estimate: Mean, standard error and half-width of the inner values
        values: (L,) inner values
        control_variates: (L,) action-independent penalty parts
        statuses: Solver status per path
        iterations: (L,) solver iterations per path
    """

    estimate: BoundEstimate
    values: np.ndarray
    control_variates: np.ndarray
    statuses: list[QpStatus] = field(default_factory=list)
    iterations: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    @property
    def max_iterations(self) -> int:
        """Most solver iterations any path needed."""
        return int(self.iterations.max(initial=0))


def upper_bound_noises(model: MdpModel, count: int, seed: int) -> np.ndarray:
    """The (count, N, noise_dim) inner-problem noise paths of a seed."""
    return sample_noises(model.noise, model.horizon, 0, count, seed, Stream.UPPER)


def _collect(solutions: list[InnerSolution], ci_multiplier: float | None) -> UpperBoundResult:
    for index, solution in enumerate(solutions):
        if solution.status is QpStatus.INFEASIBLE:
            raise InfeasibleInnerProblemError(
                f"inner problem of path {index} is infeasible", path_index=index
            )
    statuses = [solution.status for solution in solutions]
    capped = [index for index, status in enumerate(statuses) if status is QpStatus.MAX_ITERATIONS]
    if capped:
        raise UnconvergedInnerProblemError(
            f"{len(capped)} of {len(solutions)} inner problems hit the QP iteration cap "
            f"(first: path {capped[0]})",
            path_index=capped[0],
            count=len(capped),
        )
    values = np.array([solution.value for solution in solutions])
    return UpperBoundResult(
        estimate=BoundEstimate.from_samples(values, ci_multiplier),
        values=values,
        control_variates=np.array([solution.control_variate for solution in solutions]),
        statuses=statuses,
        iterations=np.array([solution.iterations for solution in solutions], dtype=np.int64),
    )


def estimate_upper_bound(
    model: MdpModel,
    penalty: Penalty,
    count: int,
    seed: int,
    *,
    tol: float | None = None,
    max_iter: int | None = None,
    warm_start: bool | None = None,
    workers: int | None = None,
    ci_multiplier: float | None = None,
    noises: np.ndarray | None = None,
) -> UpperBoundResult:
    """
    Monte Carlo upper bound over `count` inner problems.

    Finite-action models are solved by enumeration, all others through the
    inner QP. With warm starts paths are solved in order so each can start
    from its predecessor's optimizer; otherwise they run on the worker pool.

    Args:
        model: MDP of the policy being bounded
        penalty: Dual penalty
        count: Number of inner problems L (>= 2)
        seed: Master seed; paths come from the UPPER substream
        tol: QP tolerance (default from settings)
        max_iter: QP iteration cap (default from settings)
        warm_start: Warm-start QPs (default from settings)
        workers: Worker threads (default from settings)
        ci_multiplier: Half-width multiplier (default from settings)
        noises: Pre-drawn (count, N, noise_dim) paths, overriding the seed

    Raises:
        ArgumentError: If count < 2
        NonAffinePenaltyError: If a QP model is given a non-affine penalty
        InfeasibleInnerProblemError: Naming the first infeasible path
        UnconvergedInnerProblemError: If any inner QP stops at the iteration cap
    """
    if count < 2:
        raise ArgumentError(f"upper bounds need >= 2 inner problems, got {count}")
    if noises is None:
        noises = upper_bound_noises(model, count, seed)
    elif noises.shape[0] != count:
        raise ArgumentError(f"expected {count} noise paths, got {noises.shape[0]}")
    workers = settings.worker_threads if workers is None else workers
    warm_start = settings.qp_warm_start if warm_start is None else warm_start

    if warm_start and not isinstance(model, FiniteActionMdp):
        solutions: list[InnerSolution] = []
        previous = None
        for j in range(count):
            solution = inner_value(model, noises[j], penalty, tol, max_iter, previous)
            previous = solution.actions.ravel()
            solutions.append(solution)
    else:
        solutions = parallel_map(
            lambda j: inner_value(model, noises[j], penalty, tol, max_iter), range(count), workers
        )

    result = _collect(solutions, ci_multiplier)
    logger.info(
        f"Upper bound over {count} paths: {result.estimate.mean:.6g} "
        f"(se {result.estimate.std_error:.3g}, mean iterations {result.iterations.mean():.1f})"
    )
    return result


def exact_upper_bound(model: FiniteActionMdp, penalty: Penalty) -> float:
    """
    E[ max_a ( sum of rewards - penalty ) ] by enumerating every noise path.

    Raises:
        ArgumentError: If the model's noise is not finite-discrete
    """
    noise = model.noise
    if noise.kind is not NoiseKind.FINITE or not isinstance(noise, FiniteNoise):
        raise ArgumentError("exact upper bounds require finite-discrete noise")
    terms = [
        probability * inner_value(model, sequence, penalty).value
        for sequence, probability in noise.enumerate_paths(model.horizon)
    ]
    return math.fsum(terms)
