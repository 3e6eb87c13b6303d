"""Statistical and exact checks that a penalty has zero mean under a policy."""

import logging
import math
from dataclasses import dataclass

import numpy as np

from config import settings
from duality.penalties import Penalty
from errors import AnticipativePolicyError, ArgumentError
from infrastructure.streams import Stream
from mdp.base import MdpModel
from mdp.simulation import enumerate_noise_paths, simulate_paths
from policies.base import Policy
from providers.noise.finite_discrete import FiniteNoise

logger = logging.getLogger(__name__)

MIN_PATHS = 1000
STANDARD_ERRORS = 4.0
EXACT_TOLERANCE = 1e-10
ENUMERATION_LIMIT = 65_536


@dataclass(frozen=True)
class FeasibilityCheck:
    """
    Outcome of a penalty feasibility check.

    Attributes:
        mean: Sample (or exact) mean of the penalty
        std_error: Standard error of the mean (0 when exact)
        count: Paths used
        passed: |mean| <= 4 standard errors, or <= 1e-10 when exact
        exact: True when computed by enumerating the noise
    """

    mean: float
    std_error: float
    count: int
    passed: bool
    exact: bool

    @property
    def statistic(self) -> float:
        """mean / std_error (0 when both vanish)."""
        if self.std_error == 0.0:
            return 0.0 if self.mean == 0.0 else math.copysign(math.inf, self.mean)
        return self.mean / self.std_error


def _enumerable(model: MdpModel) -> bool:
    noise = model.noise
    return isinstance(noise, FiniteNoise) and noise.size**model.horizon <= ENUMERATION_LIMIT


def check_feasibility(
    penalty: Penalty,
    policy: Policy,
    model: MdpModel,
    paths: int,
    seed: int,
    *,
    workers: int | None = None,
) -> FeasibilityCheck:
    """
    Test E[penalty] = 0 under a non-anticipative policy.

    Small finite-noise models are enumerated exactly. Otherwise `paths`
    fresh paths from the FEASIBILITY substream are simulated, independent of
    the paths used for fitting.

    Raises:
        AnticipativePolicyError: If the policy is anticipative
        ArgumentError: If fewer than 1000 paths are requested for a sampled check
    """
    if not getattr(policy, "non_anticipative", False):
        raise AnticipativePolicyError(
            "feasibility only holds for non-anticipative policies"
        )

    if _enumerable(model):
        batch = enumerate_noise_paths(model, policy)
        values = penalty.evaluate(batch.states, batch.actions, batch.noises)
        assert batch.weights is not None
        mean = math.fsum(batch.weights * values)
        logger.debug(f"Exact feasibility check over {len(batch)} noise paths: mean={mean:.3e}")
        return FeasibilityCheck(
            mean=mean,
            std_error=0.0,
            count=len(batch),
            passed=abs(mean) <= EXACT_TOLERANCE,
            exact=True,
        )

    if paths < MIN_PATHS:
        raise ArgumentError(f"feasibility checks need >= {MIN_PATHS} paths, got {paths}")
    workers = settings.worker_threads if workers is None else workers
    batch = simulate_paths(model, policy, paths, seed, stream=Stream.FEASIBILITY, workers=workers)
    values = np.asarray(penalty.evaluate(batch.states, batch.actions, batch.noises))
    mean = math.fsum(values) / paths
    std_error = math.sqrt(math.fsum((values - mean) ** 2) / (paths - 1) / paths)
    passed = abs(mean) <= STANDARD_ERRORS * std_error
    logger.info(
        f"Feasibility check over {paths} paths: mean={mean:.4g}, se={std_error:.4g}, "
        f"passed={passed}"
    )
    return FeasibilityCheck(
        mean=mean, std_error=std_error, count=paths, passed=passed, exact=False
    )
