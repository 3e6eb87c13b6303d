"""Zero-mean checks for penalty basis functions."""

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from basis.spec import BasisSpec
from errors import ArgumentError
from infrastructure.streams import Stream, path_uniforms
from providers.noise.base import NoiseModel
from providers.noise.finite_discrete import FiniteNoise

MIN_DRAWS = 1000
EXACT_TOLERANCE = 1e-12
STANDARD_ERRORS = 4.0


@dataclass(frozen=True, eq=False)
class ZeroMeanCheck:
    """
    Outcome of a zero-mean check.

    Attributes:
        means: Per-function sample (or exact) means
        std_errors: Per-function standard errors (zeros when exact)
        passed: True when every mean is statistically (or exactly) zero
        exact: True when computed by enumeration of a finite noise
    """

    means: np.ndarray
    std_errors: np.ndarray
    passed: bool
    exact: bool


def zero_mean_check(
    fn: Callable[[np.ndarray], np.ndarray],
    noise: NoiseModel,
    draws: int,
    seed: int,
) -> ZeroMeanCheck:
    """
    Test E[fn(z)] = 0 componentwise.

    Finite-discrete noise is enumerated exactly (pass iff |mean| <= 1e-12).
    Otherwise `draws` samples from the BASIS_CHECK substream are used and the
    check passes iff every |mean| <= 4 standard errors.

    Args:
        fn: Maps (B, d) draws to (B,) or (B, m) values
        noise: Noise measure
        draws: Sample count (>= 1000) for non-finite noise
        seed: Master seed
    """
    if isinstance(noise, FiniteNoise):
        values = np.asarray(fn(noise.atoms), dtype=np.float64).reshape(noise.size, -1)
        means = np.array([math.fsum(noise.probabilities * column) for column in values.T])
        return ZeroMeanCheck(
            means=means,
            std_errors=np.zeros_like(means),
            passed=bool(np.all(np.abs(means) <= EXACT_TOLERANCE)),
            exact=True,
        )

    if draws < MIN_DRAWS:
        raise ArgumentError(f"zero-mean checks need >= {MIN_DRAWS} draws, got {draws}")
    uniforms = path_uniforms(seed, Stream.BASIS_CHECK, 0, 1, (draws, noise.uniform_width))[0]
    values = np.asarray(fn(noise.from_uniforms(uniforms)), dtype=np.float64).reshape(draws, -1)
    means = np.array([math.fsum(column) / draws for column in values.T])
    std_errors = values.std(axis=0, ddof=1) / math.sqrt(draws)
    return ZeroMeanCheck(
        means=means,
        std_errors=std_errors,
        passed=bool(np.all(np.abs(means) <= STANDARD_ERRORS * std_errors)),
        exact=False,
    )


def basis_zero_mean_check(
    spec: BasisSpec, noise: NoiseModel, draws: int, seed: int
) -> ZeroMeanCheck:
    """Check that every basis function of spec has zero mean under noise."""
    return zero_mean_check(spec.evaluate, noise, draws, seed)
