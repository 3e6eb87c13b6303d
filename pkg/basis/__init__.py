"""Zero-mean penalty basis functions and coordinate weights."""

from basis.checks import ZeroMeanCheck, basis_zero_mean_check, zero_mean_check
from basis.hermite import DEFAULT_HERMITE_ORDER, hermite_eval, hermite_matrix
from basis.indicator import indicator_eval, indicator_matrix
from basis.quadrature import normal_expectation
from basis.spec import BasisIndex, BasisKind, BasisSpec
from basis.taylor import CoordinateWeights, coordinate_weights, taylor_basis_eval

__all__ = [
    "DEFAULT_HERMITE_ORDER",
    "BasisIndex",
    "BasisKind",
    "BasisSpec",
    "CoordinateWeights",
    "ZeroMeanCheck",
    "basis_zero_mean_check",
    "coordinate_weights",
    "hermite_eval",
    "hermite_matrix",
    "indicator_eval",
    "indicator_matrix",
    "normal_expectation",
    "taylor_basis_eval",
    "zero_mean_check",
]
