"""
Configuration management for APEX DualBounds.

Uses pydantic-settings for type-safe environment variable loading.
Experiment-specific parameters (model, run sizes, penalties) live in the
experiment config file, see models/experiment.py.
"""

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Application settings loaded from environment variables.

    Priority:
    1. Environment variables
    2. .env file
    3. Default values
    """

    # Application Configuration
    log_level: str = Field(default="INFO", description="Logging level")
    log_file: str = Field(default="dualbounds.log", description="Log file name inside --out")
    environment: str = Field(default="development", description="Environment name")

    # Execution Configuration
    worker_threads: int = Field(default=1, ge=1, description="Default worker threads")
    chunk_size: int = Field(
        default=4096,
        ge=1,
        description="Paths per simulation chunk (fixed so results ignore thread count)",
    )

    # Statistics
    ci_multiplier: float = Field(default=1.96, gt=0, description="Half-width multiplier (95%)")

    # Inner QP Configuration
    qp_tolerance: float = Field(default=1e-8, gt=0, description="Interior-point tolerance")
    qp_max_iterations: int = Field(default=200, ge=1, description="Interior-point iteration cap")
    qp_warm_start: bool = Field(
        default=False, description="Reuse the previous path's optimizer as starting point"
    )

    # Regression Configuration
    ols_rank_tolerance: float = Field(
        default=1e-10, gt=0, description="Relative pivot cutoff for rank determination"
    )
    ols_ridge: float = Field(default=0.0, ge=0, description="Ridge penalty (0 disables)")

    # Run Trace Configuration
    trace_enabled: bool = Field(default=True, description="Write the JSON-lines run trace")
    trace_max_events_per_run: int = Field(default=10_000, description="Max trace events per run")
    trace_max_event_bytes: int = Field(default=8192, description="Max trace payload size")

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )


# Global settings instance
settings = Settings()
