"""
Report emission.

CSV: exactly the CSV_COLUMNS, floats at 6 significant digits, empty cells
for missing values. JSON: every row field, sorted keys. Both are pure
functions of the rows, so equal rows give byte-identical files.
"""

import json
import logging
from enum import Enum
from pathlib import Path

import pandas as pd

from errors import ArgumentError
from models.report import CSV_COLUMNS, ReportRow

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.6g"


class ReportFormat(str, Enum):
    """Report file formats."""

    CSV = "csv"
    JSON = "json"

    def __str__(self) -> str:
        """Return the value for string representation."""
        return self.value


def report_frame(rows: list[ReportRow]) -> pd.DataFrame:
    """The CSV table of a list of rows."""
    frame = pd.DataFrame([row.csv_record() for row in rows], columns=list(CSV_COLUMNS))
    # u64 seeds overflow int64
    frame["seed"] = frame["seed"].astype(object)
    return frame


def render_csv(rows: list[ReportRow]) -> str:
    return report_frame(rows).to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def render_json(rows: list[ReportRow]) -> str:
    records = [row.model_dump(mode="json", by_alias=True) for row in rows]
    return json.dumps({"rows": records}, sort_keys=True, indent=2) + "\n"


def emit_report(rows: list[ReportRow], format: ReportFormat | str, destination: str | Path) -> Path:
    """
    Write rows as CSV or JSON.

    Args:
        rows: Report rows (non-empty)
        format: "csv" or "json"
        destination: Output file path

    Returns:
        The written path

    Raises:
        ArgumentError: If rows is empty or the format unknown
        OSError: If the destination cannot be written
    """
    if not rows:
        raise ArgumentError("cannot emit an empty report")
    try:
        kind = ReportFormat(str(format).lower())
    except ValueError:
        raise ArgumentError(f"unknown report format {format!r}") from None

    path = Path(destination)
    text = render_csv(rows) if kind is ReportFormat.CSV else render_json(rows)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {kind} report with {len(rows)} rows to {path}")
    return path
