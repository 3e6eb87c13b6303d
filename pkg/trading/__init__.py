"""Dynamic trading benchmark: calibration, MDP view and penalty regressors."""

from trading.mdp import TradingMdp
from trading.model import (
    LAMBDA_PRESETS,
    PHI_PRESETS,
    TradingModel,
    build_model,
    cost_shape,
    resolve_lambda,
    resolve_phi,
)
from trading.regressors import penalty_regressors

__all__ = [
    "LAMBDA_PRESETS",
    "PHI_PRESETS",
    "TradingMdp",
    "TradingModel",
    "build_model",
    "cost_shape",
    "penalty_regressors",
    "resolve_lambda",
    "resolve_phi",
]
