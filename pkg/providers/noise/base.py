"""
Noise Model Interface.

Defines the contract for the i.i.d. noise z_{n+1} driving an MDP. Simulation
only ever asks a noise model to turn open-interval uniforms into draws, so
every model is reproducible under the counter-based substreams of
infrastructure.streams. Moments are analytic: nothing is estimated from
samples.
"""

from enum import Enum
from typing import Protocol

import numpy as np


class NoiseKind(str, Enum):
    """Distribution tags."""

    FINITE = "finite"
    GAUSSIAN = "gaussian"

    def __str__(self) -> str:
        """Return the value for string representation."""
        return self.value


class NoiseModel(Protocol):
    """
    Protocol defining the noise model interface.

    Attributes:
        dimension: Noise dimension d
        kind: Distribution tag
        uniform_width: Uniforms consumed per draw
    """

    @property
    def dimension(self) -> int: ...

    @property
    def kind(self) -> NoiseKind: ...

    @property
    def uniform_width(self) -> int: ...

    def from_uniforms(self, uniforms: np.ndarray) -> np.ndarray:
        """
        Map uniforms of shape (..., uniform_width) to draws of shape (..., dimension).

        Uniforms lie strictly inside (0, 1).
        """
        ...

    def raw_moment(self, order: int) -> np.ndarray:
        """
        Per-component raw moment E[z_k^order].

        Returns:
            Array of shape (dimension,)
        """
        ...
