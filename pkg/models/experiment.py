"""Experiment configuration.

An experiment is a grid of (D, T, Phi, lambda) cells sharing one run block
and one penalty list. Phi and lambda either cross or vary one at a time.
Configs are read from TOML (or JSON) and serialize to canonical JSON;
parse -> serialize -> parse is the identity.
"""

import json
import tomllib
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from errors import ArgumentError, ConfigError
from models.bounds import PenaltyKind
from trading.model import LAMBDA_PRESETS, OVERRIDABLE_FIELDS, PHI_PRESETS, resolve_phi

MAX_SEED = 2**64 - 1
CUSTOM_LABEL = "custom"
BASE_LABEL = "base"

LambdaValue = float | str
PhiValue = str | list[float] | list[list[float]]


@dataclass(frozen=True)
class ExperimentCell:
    """One (D, T, Phi, lambda) combination of the grid."""

    D: int
    T: int
    phi_label: str
    phi: str | list[float] | list[list[float]]
    lam: LambdaValue

    @property
    def lambda_value(self) -> float:
        return LAMBDA_PRESETS[self.lam] if isinstance(self.lam, str) else float(self.lam)

    @property
    def key(self) -> str:
        return f"D{self.D}-T{self.T}-{self.phi_label}-{self.lam}"


class ModelBlock(BaseModel):
    """Trading model grid.

    Scalars describe one cell; lists of sizes, Phi labels or lambda values
    expand into the product grid. A flat list of numbers is a Phi diagonal,
    a nested list a full Phi matrix.

    Attributes:
        D: Number of securities (or list)
        T: Number of periods (or list)
        lam: Cost level or preset label (or list), key "lambda"
        phi: Phi preset label, diagonal, matrix or list of labels
        gamma: Risk aversion
        overrides: Replacement calibration values (B, Psi, Sigma, x0, f0, mu)
        sweep: "grid" crosses every Phi with every lambda; "one-at-a-time" varies
            Phi at the base lambda, then lambda at the base Phi
    """

    D: int | list[int] = Field(default=5, description="Number of securities")
    T: int | list[int] = Field(default=12, description="Number of trading periods")
    lam: LambdaValue | list[LambdaValue] = Field(
        default="base", alias="lambda", description="Trading-cost level"
    )
    phi: PhiValue | list[str] = Field(default="base", description="Factor mean reversion")
    gamma: float = Field(default=0.0, ge=0, description="Risk aversion")
    overrides: dict[str, float | list[float] | list[list[float]]] = Field(
        default_factory=dict, description="Calibration overrides"
    )
    sweep: Literal["grid", "one-at-a-time"] = Field(
        default="grid", description="Phi and lambda pairing"
    )

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    @field_validator("D", "T")
    @classmethod
    def validate_sizes(cls, v: int | list[int]) -> int | list[int]:
        """Sizes must be positive and lists non-empty."""
        values = v if isinstance(v, list) else [v]
        if not values or any(size < 1 for size in values):
            raise ValueError("sizes must be >= 1 and lists non-empty")
        return v

    @field_validator("lam")
    @classmethod
    def validate_lambda(cls, v: LambdaValue | list[LambdaValue]) -> LambdaValue | list[LambdaValue]:
        """Lambda labels must be presets and numbers positive."""
        values = v if isinstance(v, list) else [v]
        if not values:
            raise ValueError("lambda list must be non-empty")
        for value in values:
            if isinstance(value, str) and value not in LAMBDA_PRESETS:
                raise ValueError(f"unknown lambda preset {value!r}")
            if not isinstance(value, str) and not value > 0:
                raise ValueError(f"lambda must be positive, got {value}")
        return v

    @field_validator("phi")
    @classmethod
    def validate_phi(cls, v: PhiValue | list[str]) -> PhiValue | list[str]:
        """Phi labels must be presets and numeric values a 2x2 diagonal or matrix."""
        if isinstance(v, list) and not v:
            raise ValueError("phi list must be non-empty")
        if isinstance(v, str) or isinstance(v[0], str):
            for label in [v] if isinstance(v, str) else v:
                if label not in PHI_PRESETS:
                    raise ValueError(f"unknown phi preset {label!r}")
            return v
        try:
            resolve_phi(v)
        except ArgumentError as e:
            raise ValueError(str(e)) from e
        return v

    @field_validator("overrides")
    @classmethod
    def validate_overrides(cls, v: dict[str, Any]) -> dict[str, Any]:
        """Only calibration inputs can be overridden."""
        unknown = sorted(set(v) - OVERRIDABLE_FIELDS)
        if unknown:
            raise ValueError(f"unknown overrides {unknown}; allowed {sorted(OVERRIDABLE_FIELDS)}")
        return v

    def _phis(self) -> list[tuple[str, str | list[float] | list[list[float]]]]:
        if isinstance(self.phi, str):
            return [(self.phi, self.phi)]
        if all(isinstance(x, str) for x in self.phi):
            return [(label, label) for label in self.phi]  # type: ignore[misc]
        return [(CUSTOM_LABEL, self.phi)]  # type: ignore[list-item]

    def _pairs(self) -> list[tuple[tuple[str, Any], LambdaValue]]:
        lambdas = self.lam if isinstance(self.lam, list) else [self.lam]
        if self.sweep == "grid":
            return list(product(self._phis(), lambdas))
        pairs = [(phi, BASE_LABEL) for phi in self._phis()]
        pairs += [((BASE_LABEL, BASE_LABEL), lam) for lam in lambdas]
        unique: list[tuple[tuple[str, Any], LambdaValue]] = []
        for pair in pairs:
            if pair not in unique:
                unique.append(pair)
        return unique

    def cells(self) -> list[ExperimentCell]:
        """Expand the grid in (D, T, Phi, lambda) order."""
        sizes = self.D if isinstance(self.D, list) else [self.D]
        horizons = self.T if isinstance(self.T, list) else [self.T]
        return [
            ExperimentCell(D=D, T=T, phi_label=label, phi=phi, lam=lam)
            for D, T, ((label, phi), lam) in product(sizes, horizons, self._pairs())
        ]


class RunBlock(BaseModel):
    """Monte Carlo sizes, seed and solver settings.

    Attributes:
        M: Lower-bound (and fitting) paths
        L: Upper-bound inner problems per penalty
        seed: Master seed (u64)
        ci_multiplier: Half-width multiplier
        value_scale: Factor applied to reported values (1e-3 = thousands)
        include_twap: Also bound the TWAP policy
        feasibility_paths: Fresh paths for feasibility checks (0 disables)
        qp_tolerance: Inner QP tolerance (settings default when unset)
        qp_max_iterations: Inner QP iteration cap (settings default when unset)
        warm_start: Warm-start inner QPs (settings default when unset)
    """

    M: int = Field(default=100_000, ge=2, description="Lower-bound paths")
    L: int = Field(default=100, ge=2, description="Upper-bound paths")
    seed: int = Field(default=0, ge=0, le=MAX_SEED, description="Master seed")
    ci_multiplier: float = Field(default=1.96, gt=0, description="Half-width multiplier")
    value_scale: float = Field(default=1e-3, gt=0, description="Reporting scale")
    include_twap: bool = Field(default=False, description="Bound TWAP too")
    feasibility_paths: int = Field(default=0, ge=0, description="Feasibility check paths")
    qp_tolerance: float | None = Field(default=None, gt=0, description="QP tolerance")
    qp_max_iterations: int | None = Field(default=None, ge=1, description="QP iteration cap")
    warm_start: bool | None = Field(default=None, description="Warm-start QPs")

    model_config = ConfigDict(frozen=True, extra="forbid")

    @model_validator(mode="after")
    def validate_sizes(self) -> "RunBlock":
        """M >= L, and feasibility checks need at least 1000 paths."""
        if self.M < self.L:
            raise ValueError(f"M ({self.M}) must be >= L ({self.L})")
        if 0 < self.feasibility_paths < 1000:
            raise ValueError("feasibility_paths must be 0 or >= 1000")
        return self


class OutputBlock(BaseModel):
    """Report destinations, relative to the output directory."""

    csv_name: str = Field(default="report.csv", description="CSV report file")
    json_name: str = Field(default="report.json", description="JSON report file")

    model_config = ConfigDict(frozen=True, extra="forbid")


class ExperimentConfig(BaseModel):
    """Complete experiment description.

    Attributes:
        model: Model grid
        run: Run sizes and seed
        penalties: Penalties to evaluate (zero, taylor-1, taylor-2, exact-lqc)
        output: Report file names
    """

    model: ModelBlock = Field(default_factory=ModelBlock, description="Model grid")
    run: RunBlock = Field(default_factory=RunBlock, description="Run settings")
    penalties: list[PenaltyKind] = Field(
        default_factory=lambda: [PenaltyKind.ZERO, PenaltyKind.TAYLOR_1, PenaltyKind.TAYLOR_2],
        description="Penalties",
    )
    output: OutputBlock = Field(default_factory=OutputBlock, description="Outputs")

    model_config = ConfigDict(frozen=True, extra="forbid")

    @field_validator("penalties", mode="before")
    @classmethod
    def parse_penalties(cls, v: Any) -> Any:
        """Accept short aliases (t1, t2, lqc) and drop duplicates."""
        if isinstance(v, str):
            v = [part for part in v.split(",") if part.strip()]
        if not isinstance(v, list):
            return v
        kinds: list[PenaltyKind] = []
        for item in v:
            kind = PenaltyKind.parse(item) if isinstance(item, str) else item
            if kind not in kinds:
                kinds.append(kind)
        if not kinds:
            raise ValueError("penalty list must be non-empty")
        return kinds

    def cells(self) -> list[ExperimentCell]:
        return self.model.cells()

    def with_overrides(
        self, seed: int | None = None, penalties: list[PenaltyKind] | None = None
    ) -> "ExperimentConfig":
        """Apply command-line overrides, revalidating the result."""
        data = self.model_dump(mode="json", by_alias=True)
        if seed is not None:
            data["run"]["seed"] = seed
        if penalties is not None:
            data["penalties"] = [str(kind) for kind in penalties]
        return parse_config(data)

    def to_json(self) -> str:
        """Canonical JSON (sorted keys, no whitespace)."""
        return json.dumps(
            self.model_dump(mode="json", by_alias=True), sort_keys=True, separators=(",", ":")
        )


def _field_paths(error: ValidationError) -> list[str]:
    return [".".join(str(part) for part in item["loc"]) for item in error.errors()]


def parse_config(data: dict[str, Any]) -> ExperimentConfig:
    """
    Validate a config mapping.

    Raises:
        ConfigError: With the dotted paths of every invalid field
    """
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        paths = _field_paths(e)
        raise ConfigError(f"invalid experiment config at {', '.join(paths)}: {e}", paths) from e


def load_config(path: str | Path) -> ExperimentConfig:
    """
    Read a TOML or JSON (by .json suffix) experiment config.

    Raises:
        ConfigError: If the file cannot be read, parsed or validated
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    try:
        data = json.loads(text) if path.suffix.lower() == ".json" else tomllib.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as e:
        raise ConfigError(f"cannot parse config {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a table/object")
    return parse_config(data)
