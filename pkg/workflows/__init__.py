"""Experiment orchestration and report emission."""

from workflows.experiment import ExperimentResult, build_penalty, run_cell, run_experiment
from workflows.reporting import ReportFormat, emit_report, render_csv, render_json, report_frame

__all__ = [
    "ExperimentResult",
    "ReportFormat",
    "build_penalty",
    "emit_report",
    "render_csv",
    "render_json",
    "report_frame",
    "run_cell",
    "run_experiment",
]
