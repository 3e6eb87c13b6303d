"""
Regressor sets phi_{n,i}(x_n, a_n) of the coordinate regressions.

A RegressorSpec assigns every (period n, basis index i) an ordered tuple of
features. Each feature is a batched map (states, actions) -> (B,) that
declares whether it is affine in the action and whether it is constant
(independent of both state and action).
"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from errors import ArgumentError

FeatureFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Feature:
    """
    One regressor column.

    Attributes:
        name: Column label used in logs and reports
        fn: Batched evaluator (states (B, ds), actions (B, da)) -> (B,)
        affine_in_action: True when fn is affine in the action argument
        constant: True when fn does not depend on state or action
    """

    name: str
    fn: FeatureFn = field(compare=False)
    affine_in_action: bool = True
    constant: bool = False

    def evaluate(self, states: np.ndarray, actions: np.ndarray) -> np.ndarray:
        values = np.asarray(self.fn(states, actions), dtype=np.float64)
        return np.broadcast_to(values, (states.shape[0],))


def constant_feature(name: str, value: float) -> Feature:
    """Feature returning the same value everywhere."""
    return Feature(
        name=name,
        fn=lambda states, actions: np.full(states.shape[0], value),
        constant=True,
    )


INTERCEPT = constant_feature("1", 1.0)


@dataclass(frozen=True, eq=False)
class RegressorSpec:
    """
    Regressors per (period, basis index).

    Attributes:
        horizon: N
        size: Number of basis indices
        table: (n, i) -> features; missing keys mean no regressors (beta = 0)
    """

    horizon: int
    size: int
    table: dict[tuple[int, int], tuple[Feature, ...]]

    @classmethod
    def build(
        cls,
        horizon: int,
        size: int,
        builder: Callable[[int, int], Sequence[Feature]],
    ) -> "RegressorSpec":
        """Materialize builder(n, i) for every period and basis index."""
        table = {
            (n, i): tuple(builder(n, i)) for n in range(horizon) for i in range(size)
        }
        return cls(horizon=horizon, size=size, table=table)

    @property
    def affine_in_action(self) -> bool:
        return all(f.affine_in_action for features in self.table.values() for f in features)

    def features(self, n: int, i: int) -> tuple[Feature, ...]:
        if not 0 <= n < self.horizon or not 0 <= i < self.size:
            raise ArgumentError(f"no regressors for period {n}, index {i}")
        return self.table.get((n, i), ())

    def design(self, n: int, i: int, states: np.ndarray, actions: np.ndarray) -> np.ndarray:
        """(B, K) design matrix at period n for basis index i."""
        features = self.features(n, i)
        if not features:
            return np.zeros((states.shape[0], 0))
        return np.column_stack([f.evaluate(states, actions) for f in features])

    def constant_mask(self, n: int, i: int) -> np.ndarray:
        return np.array([f.constant for f in self.features(n, i)], dtype=bool)


def intercept_regressors(horizon: int, size: int) -> RegressorSpec:
    """A single intercept per (n, i): coordinates fitted as sample means."""
    return RegressorSpec.build(horizon, size, lambda n, i: (INTERCEPT,))


def _column(array_name: str, j: int) -> FeatureFn:
    if array_name == "x":
        return lambda states, actions: states[:, j]
    return lambda states, actions: actions[:, j]


def linear_regressors(horizon: int, size: int, state_dim: int, action_dim: int) -> RegressorSpec:
    """Intercept plus every state and action component (affine in the action)."""
    features = (
        INTERCEPT,
        *(Feature(f"x{j}", _column("x", j)) for j in range(state_dim)),
        *(Feature(f"a{j}", _column("a", j)) for j in range(action_dim)),
    )
    return RegressorSpec.build(horizon, size, lambda n, i: features)


def _cell_indicator(state: tuple[float, ...], action: tuple[float, ...]) -> FeatureFn:
    s = np.asarray(state)
    a = np.asarray(action)

    def indicator(states: np.ndarray, actions: np.ndarray) -> np.ndarray:
        hit = np.all(states == s, axis=1) & np.all(actions == a, axis=1)
        return hit.astype(np.float64)

    return indicator


def tabular_regressors(
    horizon: int,
    size: int,
    cells: Sequence[Sequence[tuple[tuple[float, ...], tuple[float, ...]]]],
) -> RegressorSpec:
    """
    One-hot regressors over the (state, action) cells of each period.

    With every reachable cell present the regressors span any function of
    (x_n, a_n), so the fitted coordinates are exact conditional expectations.

    Args:
        cells: Per period, the (state key, action key) pairs to indicate
    """
    if len(cells) != horizon:
        raise ArgumentError(f"expected cells for {horizon} periods, got {len(cells)}")
    per_period = [
        tuple(
            Feature(f"1[x={state},a={action}]", _cell_indicator(state, action), affine_in_action=False)
            for state, action in period
        )
        for period in cells
    ]
    return RegressorSpec.build(horizon, size, lambda n, i: per_period[n])
