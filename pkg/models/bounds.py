"""Bound estimates and duality reports."""

import math
from enum import Enum

import numpy as np
from pydantic import BaseModel, Field

from config import settings
from errors import ArgumentError


class PenaltyKind(str, Enum):
    """Dual penalties an experiment can evaluate."""

    ZERO = "zero"
    TAYLOR_1 = "taylor-1"
    TAYLOR_2 = "taylor-2"
    EXACT_LQC = "exact-lqc"

    def __str__(self) -> str:
        """Return the value for string representation."""
        return self.value

    @classmethod
    def parse(cls, text: str) -> "PenaltyKind":
        """Parse a penalty name or its short CLI alias (t1, t2, lqc)."""
        key = text.strip().lower()
        aliases = {"t1": cls.TAYLOR_1, "t2": cls.TAYLOR_2, "lqc": cls.EXACT_LQC, "exact": cls.EXACT_LQC}
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise ArgumentError(f"Unknown penalty: {text!r}") from None


class BoundEstimate(BaseModel):
    """Monte Carlo estimate of a lower or upper bound.

    Attributes:
        mean: Sample mean (value units)
        std_error: Sample standard deviation / sqrt(count)
        half_width: Confidence half-width, multiplier x std_error
        count: Number of samples
        degenerate: True when the half-width is zero (single sample or no spread)
    """

    mean: float = Field(..., description="Sample mean")
    std_error: float = Field(..., ge=0, description="Standard error of the mean")
    half_width: float = Field(..., ge=0, description="Confidence half-width")
    count: int = Field(..., ge=1, description="Sample count")
    degenerate: bool = Field(default=False, description="Zero-width interval")

    model_config = {"frozen": True}

    @classmethod
    def from_samples(
        cls, samples: np.ndarray, ci_multiplier: float | None = None
    ) -> "BoundEstimate":
        """
        Summarize samples with an order-independent (exactly rounded) mean.

        Raises:
            ArgumentError: If samples is empty
        """
        values = np.asarray(samples, dtype=np.float64).ravel()
        count = values.shape[0]
        if count == 0:
            raise ArgumentError("cannot estimate a bound from zero samples")
        multiplier = settings.ci_multiplier if ci_multiplier is None else ci_multiplier

        mean = math.fsum(values) / count
        if count == 1:
            return cls(mean=mean, std_error=0.0, half_width=0.0, count=1, degenerate=True)

        variance = math.fsum((values - mean) ** 2) / (count - 1)
        std_error = math.sqrt(variance / count)
        half_width = multiplier * std_error
        return cls(
            mean=mean,
            std_error=std_error,
            half_width=half_width,
            count=count,
            degenerate=half_width == 0.0,
        )

    def scaled(self, factor: float) -> "BoundEstimate":
        """Express the estimate in other units (e.g. dollars to thousands)."""
        return BoundEstimate(
            mean=self.mean * factor,
            std_error=self.std_error * abs(factor),
            half_width=self.half_width * abs(factor),
            count=self.count,
            degenerate=self.degenerate,
        )


class DualityReport(BaseModel):
    """Lower bound, one upper bound per penalty, and the duality gap.

    Attributes:
        lower: Lower-bound estimate of the policy
        uppers: Upper-bound estimate per penalty
        tightest: Penalty with the smallest upper-bound mean
        gap_abs: Tightest UB mean minus LB mean
        gap_ratio: gap_abs / LB mean, None when the LB mean is not positive
        ratio_defined: False when the ratio form breaks down (LB mean <= 0)
        within_noise: False when a negative gap exceeds the combined half-widths
    """

    lower: BoundEstimate = Field(..., description="Lower bound")
    uppers: dict[PenaltyKind, BoundEstimate] = Field(
        default_factory=dict, description="Upper bounds by penalty"
    )
    tightest: PenaltyKind | None = Field(default=None, description="Tightest penalty")
    gap_abs: float | None = Field(default=None, description="Absolute gap")
    gap_ratio: float | None = Field(default=None, description="Relative gap")
    ratio_defined: bool = Field(default=True, description="LB mean > 0")
    within_noise: bool = Field(default=True, description="Weak duality consistent")

    model_config = {"frozen": True}

    @property
    def gap_pct(self) -> float | None:
        """Relative gap in percent, rounded to two decimals."""
        if self.gap_ratio is None:
            return None
        return round(100.0 * self.gap_ratio, 2)
