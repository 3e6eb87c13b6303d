"""
Counter-based random substreams.

Every simulated path draws its uniforms from its own Philox stream keyed by
(master seed, stream id) with the path index placed in the counter. A path is
therefore a pure function of (seed, stream, path index): chunking, worker
count and evaluation order cannot change a single bit of it.

Stream ids partition the randomness of one run:
- PRIMAL: lower-bound paths, reused for coordinate fitting
- FEASIBILITY: fresh paths for penalty feasibility checks
- UPPER: noise paths of the pathwise inner problems
- BASIS_CHECK: draws for zero-mean basis checks
"""

from enum import IntEnum

import numpy as np
from scipy.special import ndtri

from errors import ArgumentError

_SEED_MASK = (1 << 64) - 1

# Shift that maps [0, 1) doubles into the open interval (0, 1)
UNIFORM_SHIFT = 2.0**-54


class Stream(IntEnum):
    """Disjoint substream ids of one run."""

    PRIMAL = 0
    FEASIBILITY = 1
    UPPER = 2
    BASIS_CHECK = 3


def path_generator(seed: int, stream: int, path_index: int) -> np.random.Generator:
    """Create the generator owning one path's randomness."""
    if seed < 0 or path_index < 0:
        raise ArgumentError(f"seed and path index must be non-negative (got {seed}, {path_index})")
    key = np.array([seed & _SEED_MASK, int(stream)], dtype=np.uint64)
    counter = np.array([0, 0, path_index, 0], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def path_uniforms(
    seed: int,
    stream: int,
    start: int,
    count: int,
    shape: tuple[int, ...],
) -> np.ndarray:
    """
    Draw open-interval uniforms for paths start..start+count-1.

    Args:
        seed: Master seed (64-bit)
        stream: Substream id
        start: First path index
        count: Number of paths
        shape: Per-path draw shape (e.g. (horizon, width))

    Returns:
        Array of shape (count, *shape) with values strictly inside (0, 1)
    """
    out = np.empty((count, *shape), dtype=np.float64)
    for offset in range(count):
        out[offset] = path_generator(seed, stream, start + offset).random(shape)
    out += UNIFORM_SHIFT
    return out


def standard_normals(uniforms: np.ndarray) -> np.ndarray:
    """Map open-interval uniforms to standard normals by the inverse normal CDF."""
    return np.asarray(ndtri(uniforms), dtype=np.float64)
