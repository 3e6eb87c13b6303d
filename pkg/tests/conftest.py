"""Pytest configuration and fixtures."""

import os

import numpy as np
import pytest

# Set test environment variables
os.environ["ENVIRONMENT"] = "test"
os.environ["LOG_LEVEL"] = "DEBUG"
os.environ["WORKER_THREADS"] = "1"
os.environ["TRACE_ENABLED"] = "true"

from lqc.problem import LqcProblem  # noqa: E402
from lqc.riccati import solve_riccati  # noqa: E402
from mdp.finite import FiniteActionMdp  # noqa: E402
from providers.noise.finite_discrete import FiniteNoise  # noqa: E402
from providers.noise.gaussian import GaussianNoise  # noqa: E402
from trading.model import build_model  # noqa: E402


def pytest_addoption(parser: pytest.Parser) -> None:
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run desk-scale reproduction tests"
    )


def pytest_collection_modifyitems(config: pytest.Config, items: list[pytest.Item]) -> None:
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="desk-scale run; enable with --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def scalar_lqc() -> LqcProblem:
    """A = B = Q = R = Q_N = 1, N = 4, standard normal noise, x_0 = 1."""
    return LqcProblem.create(
        A=1.0,
        B=1.0,
        Q=1.0,
        R=1.0,
        Q_terminal=1.0,
        noise=GaussianNoise.standard(1),
        horizon=4,
        initial_state=1.0,
    )


@pytest.fixture
def scalar_lqc_solution(scalar_lqc: LqcProblem):
    return solve_riccati(scalar_lqc)


def _grid_transition(n, states, actions, noises):  # type: ignore[no-untyped-def]
    return states + actions + noises


def _grid_reward(n, states, actions):  # type: ignore[no-untyped-def]
    return -(states[:, 0] ** 2) - 0.5 * actions[:, 0] ** 2 + 0.3 * states[:, 0]


def _grid_terminal(states):  # type: ignore[no-untyped-def]
    return -2.0 * states[:, 0] ** 2 + states[:, 0]


@pytest.fixture
def discrete_mdp() -> FiniteActionMdp:
    """Two periods, binary noise +-1, actions {-1, 0, 1}, quadratic rewards."""
    return FiniteActionMdp(
        horizon=2,
        initial_state=[0.5],
        actions=[-1.0, 0.0, 1.0],
        noise=FiniteNoise(atoms=np.array([-1.0, 1.0]), probabilities=np.array([0.4, 0.6])),
        transition_fn=_grid_transition,
        reward_fn=_grid_reward,
        terminal_fn=_grid_terminal,
    )


@pytest.fixture
def small_trading_model():
    """D = 2, T = 6 at the base calibration."""
    return build_model(2, 6)


@pytest.fixture
def tiny_trading_model():
    """D = 1, T = 2 at the base calibration."""
    return build_model(1, 2)
