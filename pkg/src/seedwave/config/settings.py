"""Configuration settings for Seedwave.

This module defines a Pydantic ``BaseSettings`` model holding the numerical
defaults shared by the CLI and the experiment harness, read from environment
variables with the ``SEEDWAVE_`` prefix (case-insensitive) or a ``.env``
file, and `RunConfig`, the fully resolved configuration of one command-line
invocation that is echoed into every CSV header.
"""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator
from pydantic_settings import BaseSettings

from ..core.model import ModelParams

SUPPORTED_LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


class Settings(BaseSettings):
    """Numerical and output defaults with environment variable support.

    Notes:
    - Values can be provided via environment variables with prefix
      ``SEEDWAVE_`` (e.g., ``SEEDWAVE_THREADS=1``), or from a ``.env`` file.
    - Configuration is case-insensitive and validates assignments at runtime.
    - ``threads=1`` makes every run bitwise reproducible.
    """

    app_name: str = Field(default="Seedwave", description="Application name")
    debug: bool = Field(default=False, description="Enable debug mode")
    log_level: str = Field(default="INFO", description="Root logging level")

    output_dir: str = Field(default="./out", description="Directory for CSV outputs")
    threads: int = Field(
        default_factory=lambda: os.cpu_count() or 1,
        ge=1,
        description="Worker threads for sweeps and replicates",
    )
    default_seed: int = Field(default=20240601, ge=0, description="Master RNG seed")

    particle_cap: int = Field(
        default=2_000_000, ge=1, description="Maximum particles per replicate"
    )
    pde_dx: float = Field(default=0.1, gt=0.0, description="Default grid spacing")
    pde_cfl: float = Field(
        default=0.4, gt=0.0, le=0.4, description="Time step as a multiple of dx^2"
    )
    csv_significant_digits: int = Field(
        default=12, ge=1, le=17, description="Significant digits in CSV output"
    )

    quick_factor: int = Field(
        default=4, ge=1, description="Reduction of horizons and replicates in quick mode"
    )
    quick_tolerance_multiplier: float = Field(
        default=2.0, ge=1.0, description="Tolerance relaxation in quick mode"
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, value: str) -> str:
        """Validate the configured logging level.

        Args:
            value: Level name supplied via settings/env (e.g., "debug").

        Returns:
            The upper-cased level name.

        Raises:
            ValueError: If the level is not a standard logging level.
        """
        level = value.strip().upper()
        if level not in SUPPORTED_LOG_LEVELS:
            raise ValueError(
                f"Unsupported log level: {value}. "
                f"Supported levels: {', '.join(SUPPORTED_LOG_LEVELS)}"
            )
        return level

    @field_validator("output_dir")
    @classmethod
    def validate_output_dir(cls, value: str) -> str:
        """Ensure the output directory exists or can be created."""
        Path(value).mkdir(parents=True, exist_ok=True)
        return value

    @property
    def float_format(self) -> str:
        """printf-style float format used for every CSV."""
        return f"%.{self.csv_significant_digits}g"

    @property
    def log_level_number(self) -> int:
        return getattr(logging, self.log_level)

    model_config = {
        "env_file": ".env",
        "env_prefix": "SEEDWAVE_",
        "case_sensitive": False,
        "validate_assignment": True,
        "extra": "ignore",
    }


class RunConfig(BaseModel):
    """Resolved configuration of one CLI run.

    Every field has a default so a run is fully described by this object;
    `header_lines` renders it as ``# key=value`` comments for CSV headers.
    """

    model_config = ConfigDict(frozen=True)

    subcommand: str
    params: ModelParams = Field(default_factory=ModelParams.unit)
    grid: Optional[Tuple[float, float, float]] = Field(
        default=None, description="(xmin, xmax, dx) of a PDE run"
    )
    T: Optional[float] = Field(default=None, gt=0.0, description="Time horizon")
    dt: Optional[float] = Field(default=None, gt=0.0, description="Time step")
    replicates: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = Field(default=None, ge=0)
    cap: Optional[int] = Field(default=None, ge=1)
    threads: int = Field(default=1, ge=1)
    output_dir: str = "./out"
    extra: Dict[str, Any] = Field(default_factory=dict)

    def header_lines(self, version: str) -> List[str]:
        """Comment lines echoing the configuration, one ``# key=value`` per entry."""
        lines = [f"# seedwave_version={version}", f"# subcommand={self.subcommand}"]
        for key, value in self.params.describe().items():
            lines.append(f"# {key}={value}")
        for key in ("grid", "T", "dt", "replicates", "seed", "cap", "threads"):
            value = getattr(self, key)
            if value is not None:
                lines.append(f"# {key}={value}")
        for key, value in sorted(self.extra.items()):
            lines.append(f"# {key}={value}")
        return lines
