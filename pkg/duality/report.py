"""Duality gap between a policy's lower bound and its dual upper bounds."""

import logging

from models.bounds import BoundEstimate, DualityReport, PenaltyKind

logger = logging.getLogger(__name__)


def duality_gap(
    lower: BoundEstimate, uppers: dict[PenaltyKind, BoundEstimate]
) -> DualityReport:
    """
    Compare a lower bound against every upper bound.

    The tightest penalty is the one with the smallest UB mean. The relative
    gap is only formed when the LB mean is positive. A negative gap within
    the combined half-widths is Monte Carlo noise; beyond them it flags a
    violation of weak duality, which is logged and reported, never raised.
    """
    if not uppers:
        return DualityReport(lower=lower)

    tightest = min(uppers, key=lambda kind: uppers[kind].mean)
    upper = uppers[tightest]
    gap_abs = upper.mean - lower.mean
    ratio_defined = lower.mean > 0.0
    gap_ratio = gap_abs / lower.mean if ratio_defined else None
    within_noise = gap_abs >= -(lower.half_width + upper.half_width)

    if not within_noise:
        logger.warning(
            f"Upper bound {tightest} ({upper.mean:.6g}) lies below the lower bound "
            f"({lower.mean:.6g}) beyond sampling noise"
        )
    if not ratio_defined:
        logger.info(f"Lower bound {lower.mean:.6g} is not positive; relative gap undefined")

    return DualityReport(
        lower=lower,
        uppers=dict(uppers),
        tightest=tightest,
        gap_abs=gap_abs,
        gap_ratio=gap_ratio,
        ratio_defined=ratio_defined,
        within_noise=within_noise,
    )
