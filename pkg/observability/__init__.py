"""Observability helpers for experiment runs."""

from observability.run_trace import (
    RunTraceRecorder,
    canonical_json,
    clear_recorder,
    compute_hash,
    get_run_trace_recorder,
    truncate_payload,
)

__all__ = [
    "RunTraceRecorder",
    "canonical_json",
    "clear_recorder",
    "compute_hash",
    "get_run_trace_recorder",
    "truncate_payload",
]
