"""
Noise Model Factory.

Builds noise models from plain configuration dictionaries so experiment
configs and tests can describe noise declaratively.
"""

from typing import Any

import numpy as np

from errors import ArgumentError
from providers.noise.base import NoiseKind, NoiseModel
from providers.noise.finite_discrete import FiniteNoise
from providers.noise.gaussian import GaussianNoise


def create_noise_model(spec: dict[str, Any]) -> NoiseModel:
    """
    Create a noise model from a configuration dictionary.

    Supported forms:
        {"kind": "gaussian", "covariance": [[...]]}
        {"kind": "gaussian", "variances": [...]}
        {"kind": "finite", "atoms": [...], "probabilities": [...]}

    Raises:
        ArgumentError: If the kind is unknown or parameters are missing
    """
    kind = str(spec.get("kind", "")).lower()

    if kind == NoiseKind.GAUSSIAN.value:
        if "covariance" in spec:
            return GaussianNoise(covariance=np.asarray(spec["covariance"], dtype=np.float64))
        if "variances" in spec:
            return GaussianNoise.diagonal(spec["variances"])
        raise ArgumentError("gaussian noise requires 'covariance' or 'variances'")

    if kind == NoiseKind.FINITE.value:
        if "atoms" not in spec:
            raise ArgumentError("finite noise requires 'atoms'")
        atoms = np.asarray(spec["atoms"], dtype=np.float64)
        probabilities = spec.get("probabilities")
        if probabilities is None:
            return FiniteNoise.equiprobable(atoms)
        return FiniteNoise(atoms=atoms, probabilities=np.asarray(probabilities, dtype=np.float64))

    raise ArgumentError(f"Unsupported noise kind: {kind!r}")
