"""
Experiment workflow: bound the PLQC policy on every cell of a config grid.

Per cell:

    build model → value recursion → simulate M paths (PRIMAL) → lower bound →
    → fit first/second-order penalty coordinates on the same paths →
    → L inner problems per penalty on shared UPPER paths → duality gap

Cells are independent. A failing cell is logged, traced and reported with
status "failed"; the remaining cells still run.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from basis.spec import BasisSpec
from duality.feasibility import check_feasibility
from duality.penalties import Penalty, ZeroPenalty
from duality.report import duality_gap
from duality.upper_bound import estimate_upper_bound, upper_bound_noises
from errors import DualBoundError
from infrastructure.streams import Stream
from lqc.penalties import TradingValuePenalty
from lqc.problem import TradingSolution
from lqc.trading_recursion import trading_value_recursion
from mdp.paths import PathBatch
from mdp.simulation import estimate_lower_bound, simulate_paths
from models.bounds import BoundEstimate, PenaltyKind
from models.experiment import ExperimentCell, ExperimentConfig
from models.report import CellStatus, FeasibilitySummary, ReportRow
from observability.run_trace import RunTraceRecorder, timed
from policies.trading import PlqcPolicy, TwapPolicy
from regression.fitting import fit_coordinates
from trading.mdp import TradingMdp
from trading.model import TradingModel, build_model
from trading.regressors import penalty_regressors

logger = logging.getLogger(__name__)

FITTED_ORDERS = {PenaltyKind.TAYLOR_1: 1, PenaltyKind.TAYLOR_2: 2}
UPPER_COLUMNS = {
    PenaltyKind.ZERO: "ub_zero",
    PenaltyKind.TAYLOR_1: "ub_t1",
    PenaltyKind.TAYLOR_2: "ub_t2",
    PenaltyKind.EXACT_LQC: "ub_lqc",
}


@dataclass
class ExperimentResult:
    """Rows of a run, in cell order."""

    rows: list[ReportRow] = field(default_factory=list)

    @property
    def failed(self) -> list[ReportRow]:
        return [row for row in self.rows if row.status is CellStatus.FAILED]

    @property
    def completed(self) -> bool:
        return not self.failed


def build_penalty(
    kind: PenaltyKind,
    model: TradingModel,
    solution: TradingSolution,
    paths: PathBatch,
    workers: int | None = None,
) -> Penalty:
    """The zero, analytic, or regression-fitted penalty of a kind."""
    if kind is PenaltyKind.ZERO:
        return ZeroPenalty()
    if kind is PenaltyKind.EXACT_LQC:
        return TradingValuePenalty(model, solution)
    basis = BasisSpec.taylor(model.noise, order=FITTED_ORDERS[kind])
    regressors = penalty_regressors(model, solution, basis)
    return fit_coordinates(paths, basis, regressors, workers=workers)


def _cell_parameters(cell: ExperimentCell, config: ExperimentConfig) -> dict[str, object]:
    return {
        "D": cell.D,
        "T": cell.T,
        "phi_label": cell.phi_label,
        "lambda": cell.lambda_value,
        "gamma": config.model.gamma,
        "seed": config.run.seed,
        "M": config.run.M,
        "L": config.run.L,
    }


def run_cell(
    cell: ExperimentCell,
    config: ExperimentConfig,
    *,
    workers: int | None = None,
    recorder: RunTraceRecorder | None = None,
) -> ReportRow:
    """
    Bound the PLQC policy on one cell.

    Raises:
        DualBoundError: Any model, regression or solver failure of the cell
    """
    run = config.run
    seed = run.seed
    scale = run.value_scale
    model = build_model(
        cell.D,
        cell.T,
        lam=cell.lam,
        phi=cell.phi,
        gamma=config.model.gamma,
        overrides=config.model.overrides,
    )
    solution = trading_value_recursion(model)
    mdp = TradingMdp(model)
    policy = PlqcPolicy(model, solution)

    with timed() as clock:
        paths = simulate_paths(mdp, policy, run.M, seed, stream=Stream.PRIMAL, workers=workers)
        lower = estimate_lower_bound(paths, run.ci_multiplier)
    logger.info(f"[{cell.key}] LB = {lower.mean * scale:.6g} ± {lower.half_width * scale:.3g}")
    if recorder:
        recorder.record_event(
            f"cell:{cell.key}:lower",
            kind="bound",
            name="lower",
            latency_ms=clock.latency_ms,
            data={"mean": lower.mean, "half_width": lower.half_width, "count": lower.count},
        )

    noises = upper_bound_noises(mdp, run.L, seed)
    uppers: dict[PenaltyKind, BoundEstimate] = {}
    qp_iterations: dict[str, int] = {}
    feasibility: dict[str, FeasibilitySummary] = {}
    for kind in config.penalties:
        with timed() as clock:
            penalty = build_penalty(kind, model, solution, paths, workers)
            result = estimate_upper_bound(
                mdp,
                penalty,
                run.L,
                seed,
                tol=run.qp_tolerance,
                max_iter=run.qp_max_iterations,
                warm_start=run.warm_start,
                workers=workers,
                ci_multiplier=run.ci_multiplier,
                noises=noises,
            )
        uppers[kind] = result.estimate
        qp_iterations[str(kind)] = result.max_iterations
        logger.info(
            f"[{cell.key}] UB[{kind}] = {result.estimate.mean * scale:.6g} "
            f"± {result.estimate.half_width * scale:.3g}"
        )
        if recorder:
            recorder.record_event(
                f"cell:{cell.key}:upper:{kind}",
                kind="penalty",
                name=str(kind),
                latency_ms=clock.latency_ms,
                data={
                    "mean": result.estimate.mean,
                    "half_width": result.estimate.half_width,
                    "max_iterations": result.max_iterations,
                    "mean_iterations": float(np.mean(result.iterations)),
                },
            )

        if kind in FITTED_ORDERS and run.feasibility_paths:
            check = check_feasibility(
                penalty, policy, mdp, run.feasibility_paths, seed, workers=workers
            )
            feasibility[str(kind)] = FeasibilitySummary(
                mean=check.mean * scale,
                std_error=check.std_error * scale,
                count=check.count,
                passed=check.passed,
            )
            if not check.passed:
                logger.warning(f"[{cell.key}] {kind} penalty failed its feasibility check")

    lower_scaled = lower.scaled(scale)
    report = duality_gap(lower_scaled, {kind: est.scaled(scale) for kind, est in uppers.items()})

    values: dict[str, object] = {
        "lb": lower_scaled.mean,
        "lb_hw": lower_scaled.half_width,
        "gap_pct": report.gap_pct,
        "gap_abs": report.gap_abs,
        "tightest": str(report.tightest) if report.tightest else None,
        "within_noise": report.within_noise,
        "qp_iterations": qp_iterations,
        "feasibility": feasibility,
    }
    for kind, estimate in report.uppers.items():
        column = UPPER_COLUMNS[kind]
        values[column] = estimate.mean
        values[f"{column}_hw"] = estimate.half_width

    if run.include_twap:
        twap_paths = simulate_paths(
            mdp, TwapPolicy(model), run.M, seed, stream=Stream.PRIMAL, workers=workers
        )
        twap = estimate_lower_bound(twap_paths, run.ci_multiplier).scaled(scale)
        values["twap_lb"] = twap.mean
        values["twap_lb_hw"] = twap.half_width

    return ReportRow.model_validate({**_cell_parameters(cell, config), **values})


def run_experiment(
    config: ExperimentConfig,
    *,
    workers: int | None = None,
    recorder: RunTraceRecorder | None = None,
) -> ExperimentResult:
    """
    Run every cell of a config.

    Identical config and seed give identical rows for any worker count.
    """
    if config.model.gamma > 0.0:
        logger.warning(
            f"Risk aversion gamma={config.model.gamma} > 0; the risk-neutral "
            "calibration is the reference setting"
        )
    cells = config.cells()
    logger.info(f"Running {len(cells)} cells with M={config.run.M}, L={config.run.L}")
    result = ExperimentResult()

    for cell in cells:
        if recorder:
            recorder.record_event(f"cell:{cell.key}:start", kind="cell", name=cell.key)
        try:
            with timed() as clock:
                row = run_cell(cell, config, workers=workers, recorder=recorder)
        except Exception as e:
            if isinstance(e, DualBoundError):
                logger.error(f"✗ Cell {cell.key} failed: {type(e).__name__}: {e}")
            else:
                logger.exception(f"✗ Cell {cell.key} failed unexpectedly: {type(e).__name__}: {e}")
            if recorder:
                recorder.record_event(
                    f"cell:{cell.key}:failed",
                    kind="cell",
                    name=cell.key,
                    data={"status": "failed", "error": f"{type(e).__name__}: {e}"},
                )
            row = ReportRow.model_validate(
                {
                    **_cell_parameters(cell, config),
                    "status": CellStatus.FAILED,
                    "error": f"{type(e).__name__}: {e}",
                }
            )
        else:
            logger.info(f"✓ Cell {cell.key} complete (gap {row.gap_pct}%)")
            if recorder:
                recorder.record_event(
                    f"cell:{cell.key}:complete",
                    kind="cell",
                    name=cell.key,
                    latency_ms=clock.latency_ms,
                    data={"status": "completed", "gap_pct": row.gap_pct, "gap_abs": row.gap_abs},
                )
        result.rows.append(row)

    logger.info(f"Experiment finished: {len(result.rows) - len(result.failed)} of {len(cells)} cells")
    return result
