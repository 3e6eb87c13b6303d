"""
Dense convex quadratic programs.

    minimize    1/2 u'Pu + q'u + c0
    subject to  G u <= h,  A u = b
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from errors import ArgumentError

SYMMETRY_TOLERANCE = 1e-12


class QpStatus(str, Enum):
    """Termination status of a QP solve."""

    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    MAX_ITERATIONS = "max-iterations"

    def __str__(self) -> str:
        """Return the value for string representation."""
        return self.value


def _block(matrix: np.ndarray | None, columns: int, name: str) -> np.ndarray:
    if matrix is None:
        return np.zeros((0, columns))
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    if matrix.shape[1] != columns:
        raise ArgumentError(f"{name} has {matrix.shape[1]} columns, expected {columns}")
    return matrix


def _vector(vector: np.ndarray | None, rows: int, name: str) -> np.ndarray:
    if vector is None:
        vector = np.zeros(0)
    vector = np.asarray(vector, dtype=np.float64).ravel()
    if vector.shape[0] != rows:
        raise ArgumentError(f"{name} has {vector.shape[0]} entries, expected {rows}")
    return vector


@dataclass(frozen=True, eq=False)
class QpProblem:
    """
    A dense QP. Missing constraint blocks are stored as empty arrays.

    Attributes:
        P: (n, n) symmetric objective matrix
        q: (n,) linear term
        G: (m, n) inequality matrix
        h: (m,) inequality bounds
        A: (p, n) equality matrix
        b: (p,) equality right-hand side
        c0: Constant objective offset
    """

    P: np.ndarray
    q: np.ndarray
    G: np.ndarray | None = None
    h: np.ndarray | None = None
    A: np.ndarray | None = None
    b: np.ndarray | None = None
    c0: float = 0.0
    _scale: float = field(init=False, repr=False)

    def __post_init__(self) -> None:
        P = np.atleast_2d(np.asarray(self.P, dtype=np.float64))
        n = P.shape[0]
        if P.shape != (n, n):
            raise ArgumentError(f"P must be square, got {P.shape}")
        scale = max(1.0, float(np.abs(P).max(initial=0.0)))
        if np.abs(P - P.T).max(initial=0.0) > SYMMETRY_TOLERANCE * scale:
            raise ArgumentError("P must be symmetric")

        G = _block(self.G, n, "G")
        A = _block(self.A, n, "A")
        object.__setattr__(self, "P", 0.5 * (P + P.T))
        object.__setattr__(self, "q", _vector(self.q, n, "q"))
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "h", _vector(self.h, G.shape[0], "h"))
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", _vector(self.b, A.shape[0], "b"))
        object.__setattr__(self, "c0", float(self.c0))
        object.__setattr__(self, "_scale", scale)

    @property
    def num_variables(self) -> int:
        return int(self.P.shape[0])

    @property
    def num_inequalities(self) -> int:
        return int(self.G.shape[0])  # type: ignore[union-attr]

    @property
    def num_equalities(self) -> int:
        return int(self.A.shape[0])  # type: ignore[union-attr]

    def objective(self, u: np.ndarray) -> float:
        """1/2 u'Pu + q'u + c0."""
        return float(0.5 * u @ self.P @ u + self.q @ u + self.c0)

    def with_offset(self, q_shift: np.ndarray, c_shift: float) -> "QpProblem":
        """Same feasible set with q + q_shift and c0 + c_shift."""
        return QpProblem(
            P=self.P,
            q=self.q + q_shift,
            G=self.G,
            h=self.h,
            A=self.A,
            b=self.b,
            c0=self.c0 + c_shift,
        )


@dataclass(frozen=True)
class KktResiduals:
    """
    Infinity norms of the KKT conditions.

    Attributes:
        primal: max(|(Gu - h)+|, |Au - b|)
        dual: Stationarity |Pu + q + G'z + A'y| and multiplier sign violation
        complementarity: |z o (h - Gu)|
    """

    primal: float
    dual: float
    complementarity: float

    @property
    def worst(self) -> float:
        return max(self.primal, self.dual, self.complementarity)


@dataclass(frozen=True, eq=False)
class QpSolution:
    """
    Result of a QP solve.

    Attributes:
        x: Optimizer (best iterate when not optimal)
        value: Objective value at x, including c0
        status: Termination status
        residuals: KKT residuals at (x, z, y)
        iterations: Interior-point iterations used
        z: Inequality multipliers
        y: Equality multipliers
    """

    x: np.ndarray
    value: float
    status: QpStatus
    residuals: KktResiduals
    iterations: int
    z: np.ndarray
    y: np.ndarray

    @property
    def optimal(self) -> bool:
        return self.status is QpStatus.OPTIMAL
