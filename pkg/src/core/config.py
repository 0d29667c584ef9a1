"""
WaveBench Configuration Management
Process-wide settings read from WAVEBENCH_* variables or .env.

Experiment parameters (geometry, budgets, SNR grids) live in
src.bench.config; these knobs only change where results go and how a
run is executed, never what it computes.
"""

from pathlib import Path
from typing import Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

LogLevel = Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


class Settings(BaseSettings):
    """Machine- or shell-level settings; every field has a default."""

    model_config = SettingsConfigDict(
        env_prefix="WAVEBENCH_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # ═══════════════════════════════════════════════════════════════
    # RESULTS
    # ═══════════════════════════════════════════════════════════════
    output_dir: Path = Field(
        default=Path("./results"),
        description="Fallback output_dir for experiment files that do not set one",
    )

    # ═══════════════════════════════════════════════════════════════
    # MONTE CARLO EXECUTION
    # ═══════════════════════════════════════════════════════════════
    workers: int = Field(
        default=1,
        ge=1,
        le=256,
        description="Process-pool width for trials; 1 runs them in-process",
    )

    # ═══════════════════════════════════════════════════════════════
    # LOGGING
    # ═══════════════════════════════════════════════════════════════
    log_level: LogLevel = Field(default="INFO", description="Console verbosity")
    log_file: Path = Field(
        default=Path("./logs/wavebench.log"),
        description="DEBUG-level run log",
    )

    @field_validator("log_level", mode="before")
    @classmethod
    def normalize_level(cls, v: object) -> object:
        """Accept `debug`, ` Info ` and friends."""
        return v.strip().upper() if isinstance(v, str) else v


settings = Settings()
