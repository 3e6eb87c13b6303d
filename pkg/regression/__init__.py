"""Coordinate regressions and the regression-based penalty model."""

from regression.fitting import coordinate_responses, fit_coordinates
from regression.ols import OlsDiagnostics, ols_diagnostics, ols_solve
from regression.penalty_model import PenaltyModel
from regression.regressors import (
    INTERCEPT,
    Feature,
    RegressorSpec,
    constant_feature,
    intercept_regressors,
    linear_regressors,
    tabular_regressors,
)

__all__ = [
    "INTERCEPT",
    "Feature",
    "OlsDiagnostics",
    "PenaltyModel",
    "RegressorSpec",
    "constant_feature",
    "coordinate_responses",
    "fit_coordinates",
    "intercept_regressors",
    "linear_regressors",
    "ols_diagnostics",
    "ols_solve",
    "tabular_regressors",
]
