"""Report rows of an experiment run."""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

CSV_COLUMNS: tuple[str, ...] = (
    "D",
    "T",
    "phi_label",
    "lambda",
    "gamma",
    "lb",
    "lb_hw",
    "ub_zero",
    "ub_zero_hw",
    "ub_t1",
    "ub_t1_hw",
    "ub_t2",
    "ub_t2_hw",
    "gap_pct",
    "gap_abs",
    "seed",
    "M",
    "L",
)


class CellStatus(str, Enum):
    """Outcome of one experiment cell."""

    COMPLETED = "completed"
    FAILED = "failed"

    def __str__(self) -> str:
        """Return the value for string representation."""
        return self.value


class FeasibilitySummary(BaseModel):
    """Feasibility check of one fitted penalty (reported units)."""

    mean: float = Field(..., description="Penalty mean")
    std_error: float = Field(..., ge=0, description="Standard error")
    count: int = Field(..., ge=1, description="Paths")
    passed: bool = Field(..., description="|mean| <= 4 standard errors")

    model_config = ConfigDict(frozen=True)


class ReportRow(BaseModel):
    """One cell of the report.

    The CSV carries the columns in CSV_COLUMNS; the JSON report carries
    every field. Bound values are in reporting units (thousands by default).

    Attributes:
        D, T, phi_label, lam, gamma: Cell parameters
        lb, lb_hw: PLQC lower bound and half-width
        ub_zero, ub_t1, ub_t2, ub_lqc: Upper bounds per penalty, with *_hw half-widths
        gap_pct: Relative gap in percent, None when LB <= 0
        gap_abs: Tightest UB minus LB
        tightest: Penalty giving the tightest UB
        within_noise: False when weak duality is violated beyond the half-widths
        twap_lb, twap_lb_hw: TWAP lower bound when requested
        qp_iterations: Most QP iterations any inner problem needed, per penalty
        feasibility: Feasibility checks of fitted penalties, when requested
        status: Cell outcome
        error: Failure message of a failed cell
    """

    D: int = Field(..., description="Securities")
    T: int = Field(..., description="Periods")
    phi_label: str = Field(..., description="Phi label")
    lam: float = Field(..., alias="lambda", description="Cost level")
    gamma: float = Field(..., description="Risk aversion")
    seed: int = Field(..., description="Master seed")
    M: int = Field(..., description="Lower-bound paths")
    L: int = Field(..., description="Upper-bound paths")

    lb: float | None = None
    lb_hw: float | None = None
    ub_zero: float | None = None
    ub_zero_hw: float | None = None
    ub_t1: float | None = None
    ub_t1_hw: float | None = None
    ub_t2: float | None = None
    ub_t2_hw: float | None = None
    ub_lqc: float | None = None
    ub_lqc_hw: float | None = None
    gap_pct: float | None = None
    gap_abs: float | None = None
    tightest: str | None = None
    within_noise: bool | None = None

    twap_lb: float | None = None
    twap_lb_hw: float | None = None
    qp_iterations: dict[str, int] = Field(default_factory=dict)
    feasibility: dict[str, FeasibilitySummary] = Field(default_factory=dict)

    status: CellStatus = Field(default=CellStatus.COMPLETED, description="Cell outcome")
    error: str | None = Field(default=None, description="Failure message")

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    def csv_record(self) -> dict[str, object]:
        """The CSV columns of this row, in order."""
        data = self.model_dump(by_alias=True)
        return {column: data[column] for column in CSV_COLUMNS}
