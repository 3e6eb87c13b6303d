"""
Run trace recorder - experiment observability.

Best-effort JSON-lines telemetry for experiment runs: run start and completion,
cell lifecycle, and per-penalty solver diagnostics.

Key Guarantees:
1. NEVER raises exceptions - trace failures must not break a run
2. Bounded event volume - caps per run and payload size limits
3. Deterministic payloads - canonical JSON, configs fingerprinted by hash

Configuration (settings / environment variables):
- TRACE_ENABLED: Enable/disable tracing (default true)
- TRACE_MAX_EVENTS_PER_RUN: Max events per run (default 10000)
- TRACE_MAX_EVENT_BYTES: Max payload size in bytes (default 8192)
"""

import hashlib
import json
import logging
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from config import settings

logger = logging.getLogger(__name__)

TRACE_FILE_NAME = "run_trace.jsonl"


# =============================================================================
# CORE UTILITIES
# =============================================================================


def canonical_json(obj: Any) -> str:
    """
    Convert object to canonical JSON string (sorted keys, no whitespace).

    This ensures consistent hashing across Python versions and platforms.
    """
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)


def compute_hash(data: Any) -> str:
    """Compute SHA256 hash of data in canonical JSON form."""
    canonical = canonical_json(data)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def truncate_payload(data: dict[str, Any], max_bytes: int) -> dict[str, Any]:
    """
    Truncate payload to fit within size limit.

    Progressively shortens large values until under limit.
    """
    if len(canonical_json(data).encode("utf-8")) <= max_bytes:
        return data

    result = dict(data)
    for key, value in list(result.items()):
        if isinstance(value, str) and len(value) > 100:
            result[key] = f"{value[:50]}...<truncated>"
        elif isinstance(value, dict):
            result[key] = {"_truncated": True, "_hash": compute_hash(value)}
        elif isinstance(value, list) and len(value) > 5:
            result[key] = value[:5] + [f"...<{len(value) - 5} more>"]

        if len(canonical_json(result).encode("utf-8")) <= max_bytes:
            return result

    # Last resort: keep only the identifying fields
    return {
        "_truncated": True,
        "_original_hash": compute_hash(data),
        "cell": data.get("cell"),
        "status": data.get("status"),
    }


# =============================================================================
# RUN TRACE RECORDER
# =============================================================================


@dataclass
class RunTraceRecorder:
    """
    Appends run events to a JSON-lines file.

    Thread-safe, best-effort recording that never raises exceptions.

    Usage:
        recorder = RunTraceRecorder(run_id="a1b2c3", directory=Path("out"))
        recorder.record_run_start(config.model_dump(mode="json"))
        recorder.record_event("cell:D5-T12:start", kind="cell", name="D5-T12")
        recorder.record_run_complete({"completed": 1}, status="completed")
    """

    run_id: str
    directory: Path

    _event_count: int = field(default=0, init=False)
    _error_count: int = field(default=0, init=False)
    _error_logged: bool = field(default=False, init=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False)

    @property
    def path(self) -> Path:
        return self.directory / TRACE_FILE_NAME

    @property
    def event_count(self) -> int:
        return self._event_count

    @property
    def error_count(self) -> int:
        return self._error_count

    def should_record(self) -> bool:
        return settings.trace_enabled

    def _handle_error(self, operation: str, error: Exception) -> None:
        """
        Handle trace errors (best-effort, never raise).

        Logs once per run to avoid log spam, increments error counter.
        """
        self._error_count += 1

        if not self._error_logged:
            self._error_logged = True
            logger.warning(
                f"Run trace {operation} failed (run={self.run_id}): {error}. "
                "Subsequent errors will be counted but not logged."
            )

    def _write(self, record: dict[str, Any]) -> None:
        line = canonical_json(record)
        with self._lock, self.path.open("a", encoding="utf-8") as handle:
            handle.write(line + "\n")

    def record_run_start(self, config: dict[str, Any], status: str = "running") -> None:
        """
        Record the run start with the config fingerprint.

        Args:
            config: JSON-ready experiment config
            status: Initial status (default: running)
        """
        if not self.should_record():
            return
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            self._write(
                {
                    "run_id": self.run_id,
                    "kind": "run",
                    "status": status,
                    "config_hash": compute_hash(config),
                    "data": truncate_payload(config, settings.trace_max_event_bytes),
                }
            )
            logger.debug(f"Run trace: recorded run start (run={self.run_id})")
        except Exception as e:
            self._handle_error("record_run_start", e)

    def record_run_complete(
        self, summary: dict[str, Any] | None = None, status: str = "completed"
    ) -> None:
        """
        Record run completion.

        Args:
            summary: Counts of completed and failed cells
            status: Final status (completed, partial, failed)
        """
        if not self.should_record():
            return
        try:
            self._write(
                {
                    "run_id": self.run_id,
                    "kind": "run",
                    "status": status,
                    "event_count": self._event_count,
                    "trace_errors": self._error_count,
                    "data": truncate_payload(summary or {}, settings.trace_max_event_bytes),
                }
            )
            logger.debug(
                f"Run trace: recorded run complete "
                f"(run={self.run_id}, status={status}, events={self._event_count})"
            )
        except Exception as e:
            self._handle_error("record_run_complete", e)

    def record_event(
        self,
        event_key: str,
        kind: str,
        name: str,
        latency_ms: int | None = None,
        data: dict[str, Any] | None = None,
    ) -> None:
        """
        Record a run event.

        Args:
            event_key: Unique key (e.g., "cell:D5-T12:upper:taylor-2")
            kind: Event type (cell, penalty, regression, system)
            name: Event name
            latency_ms: Event duration in milliseconds
            data: Event payload
        """
        if not self.should_record():
            return

        if self._event_count >= settings.trace_max_events_per_run:
            logger.debug(
                f"Run trace: event cap reached "
                f"(run={self.run_id}, cap={settings.trace_max_events_per_run})"
            )
            return

        try:
            self._write(
                {
                    "run_id": self.run_id,
                    "event_key": event_key,
                    "kind": kind,
                    "name": name,
                    "latency_ms": latency_ms,
                    "data": truncate_payload(data or {}, settings.trace_max_event_bytes),
                }
            )
            self._event_count += 1
        except Exception as e:
            self._handle_error("record_event", e)


# =============================================================================
# SINGLETON FACTORY
# =============================================================================

_recorders: dict[str, RunTraceRecorder] = {}


def get_run_trace_recorder(run_id: str, directory: Path) -> RunTraceRecorder:
    """Get or create the recorder of a run."""
    if run_id not in _recorders:
        _recorders[run_id] = RunTraceRecorder(run_id=run_id, directory=Path(directory))
    return _recorders[run_id]


def clear_recorder(run_id: str) -> None:
    """Remove recorder from cache (call on run completion)."""
    _recorders.pop(run_id, None)


class timed:
    """Context manager measuring wall time in milliseconds."""

    def __enter__(self) -> "timed":
        self.start = time.perf_counter()
        self.latency_ms = 0
        return self

    def __exit__(self, *exc: object) -> None:
        self.latency_ms = int((time.perf_counter() - self.start) * 1000)
