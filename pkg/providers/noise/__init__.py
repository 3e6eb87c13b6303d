"""Noise models behind a common protocol."""

from providers.noise.base import NoiseKind, NoiseModel
from providers.noise.factory import create_noise_model
from providers.noise.finite_discrete import FiniteNoise
from providers.noise.gaussian import GaussianNoise

__all__ = ["FiniteNoise", "GaussianNoise", "NoiseKind", "NoiseModel", "create_noise_model"]
