"""
Path simulation and lower-bound estimation.

Paths are simulated in fixed-size chunks. Each path's noise comes from its
own counter-based substream, and the chunk layout depends only on the chunk
size, so the same (model, policy, count, seed) yields bit-identical paths for
any worker count.
"""

import logging

import numpy as np

from config import settings
from errors import ArgumentError
from infrastructure.parallel import chunk_ranges, parallel_map
from infrastructure.streams import Stream, path_uniforms
from mdp.base import MdpModel
from mdp.paths import PathBatch, SamplePath, tail_values
from models.bounds import BoundEstimate
from policies.base import Policy
from providers.noise.base import NoiseKind, NoiseModel
from providers.noise.finite_discrete import FiniteNoise

logger = logging.getLogger(__name__)


def sample_noises(
    noise: NoiseModel,
    horizon: int,
    start: int,
    count: int,
    seed: int,
    stream: int,
) -> np.ndarray:
    """
    Draw noise paths start..start+count-1 of a substream.

    Returns:
        (count, horizon, noise_dim) array
    """
    uniforms = path_uniforms(seed, stream, start, count, (horizon, noise.uniform_width))
    return noise.from_uniforms(uniforms)


def _run_policy(model: MdpModel, policy: Policy, noises: np.ndarray) -> PathBatch:
    count, horizon = noises.shape[0], model.horizon
    states = np.empty((count, horizon + 1, model.state_dim))
    actions = np.empty((count, horizon, model.action_dim))
    rewards = np.empty((count, horizon + 1))

    states[:, 0] = model.initial_state()
    for n in range(horizon):
        current = states[:, n]
        action = np.asarray(policy.act(n, current), dtype=np.float64).reshape(
            count, model.action_dim
        )
        model.check_admissible(n, current, action)
        actions[:, n] = action
        rewards[:, n] = model.reward(n, current, action)
        states[:, n + 1] = model.transition(n, current, action, noises[:, n])
    rewards[:, horizon] = model.terminal_reward(states[:, horizon])

    return PathBatch(
        states=states,
        actions=actions,
        noises=noises,
        rewards=rewards,
        values=tail_values(rewards),
    )


def simulate_paths(
    model: MdpModel,
    policy: Policy,
    count: int,
    seed: int,
    *,
    stream: int = Stream.PRIMAL,
    workers: int | None = None,
    chunk_size: int | None = None,
) -> PathBatch:
    """
    Simulate `count` independent paths of a policy.

    Args:
        model: MDP to simulate
        policy: Decision rules producing admissible actions
        count: Number of paths (>= 1)
        seed: 64-bit master seed
        stream: Substream id (PRIMAL for lower-bound and fitting paths)
        workers: Worker threads (default from settings)
        chunk_size: Paths per chunk (default from settings)

    Returns:
        PathBatch with rewards and tail values cached per path

    Raises:
        ArgumentError: If count < 1
        InadmissibleActionError: If the policy leaves the admissible set
    """
    if count < 1:
        raise ArgumentError(f"path count must be >= 1, got {count}")
    workers = settings.worker_threads if workers is None else workers
    chunk_size = settings.chunk_size if chunk_size is None else chunk_size

    def simulate_chunk(bounds: tuple[int, int]) -> PathBatch:
        start, size = bounds
        noises = sample_noises(model.noise, model.horizon, start, size, seed, stream)
        return _run_policy(model, policy, noises)

    chunks = chunk_ranges(count, chunk_size)
    logger.debug(f"Simulating {count} paths in {len(chunks)} chunks (stream={int(stream)})")
    batch = PathBatch.concatenate(parallel_map(simulate_chunk, chunks, workers))
    return PathBatch(
        states=batch.states,
        actions=batch.actions,
        noises=batch.noises,
        rewards=batch.rewards,
        values=batch.values,
        seed=seed,
    )


def enumerate_noise_paths(model: MdpModel, policy: Policy) -> PathBatch:
    """
    Run a policy along every noise sequence of a finite-noise model.

    Returns:
        PathBatch whose weights are the path probabilities

    Raises:
        ArgumentError: If the noise is not finite-discrete
    """
    noise = model.noise
    if noise.kind is not NoiseKind.FINITE or not isinstance(noise, FiniteNoise):
        raise ArgumentError("exact enumeration requires finite-discrete noise")

    sequences, probabilities = zip(*noise.enumerate_paths(model.horizon), strict=True)
    batch = _run_policy(model, policy, np.stack(sequences))
    return PathBatch(
        states=batch.states,
        actions=batch.actions,
        noises=batch.noises,
        rewards=batch.rewards,
        values=batch.values,
        weights=np.asarray(probabilities, dtype=np.float64),
    )


def pathwise_values(path: SamplePath, model: MdpModel) -> np.ndarray:
    """
    Recompute the tail values V_0..V_N of one path from its trajectory.

    V_n = sum_{k=n}^{N-1} r_k(x_k, a_k) + r_N(x_N), so V_n = r_n + V_{n+1}.
    """
    horizon = model.horizon
    rewards = np.empty(horizon + 1)
    for n in range(horizon):
        rewards[n] = model.reward(n, path.states[n][None, :], path.actions[n][None, :])[0]
    rewards[horizon] = model.terminal_reward(path.states[horizon][None, :])[0]
    return tail_values(rewards)


def estimate_lower_bound(paths: PathBatch, ci_multiplier: float | None = None) -> BoundEstimate:
    """
    Lower bound as the sample mean of V_0 over paths.

    Raises:
        ArgumentError: If the path set is empty
    """
    if len(paths) == 0:
        raise ArgumentError("cannot estimate a lower bound from an empty path set")
    return BoundEstimate.from_samples(paths.values[:, 0], ci_multiplier)
