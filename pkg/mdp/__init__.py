"""Finite-horizon MDPs: models, sample paths, simulation and exact oracles."""

from mdp.base import MdpModel, QuadraticInnerModel
from mdp.finite import (
    FiniteActionMdp,
    FiniteSolution,
    TabularPolicy,
    backward_induction,
    exact_policy_value,
    exploring_paths,
)
from mdp.paths import PathBatch, SamplePath, tail_values
from mdp.simulation import (
    enumerate_noise_paths,
    estimate_lower_bound,
    pathwise_values,
    sample_noises,
    simulate_paths,
)

__all__ = [
    "FiniteActionMdp",
    "FiniteSolution",
    "MdpModel",
    "PathBatch",
    "QuadraticInnerModel",
    "SamplePath",
    "TabularPolicy",
    "backward_induction",
    "enumerate_noise_paths",
    "estimate_lower_bound",
    "exact_policy_value",
    "exploring_paths",
    "pathwise_values",
    "sample_noises",
    "simulate_paths",
    "tail_values",
]
