"""
Settings loading (environment, then config.yaml) and run-configuration validation.
"""

import os
from dataclasses import dataclass, field
from typing import Optional

import yaml
from loguru import logger

from .constants import (
    AnalysisSettings,
    DEFAULT_CONFIG_PATH,
    GridSpec,
    MAX_TOL,
    MIN_GRID_DIM,
    MIN_NMAX,
)
from .errors import ConfigError


def _env_threads() -> Optional[int]:
    value = os.getenv("BLOCHLAB_THREADS")
    return int(value) if value else None


def load_settings(config_path: str = DEFAULT_CONFIG_PATH) -> AnalysisSettings:
    """Load analysis settings from environment variables and the YAML config file."""
    try:
        # Start with environment-based configuration
        settings = AnalysisSettings(
            nmax=int(os.getenv("BLOCHLAB_NMAX", 400)),
            grid=GridSpec.parse(os.getenv("BLOCHLAB_GRID", "512x256")),
            tol=float(os.getenv("BLOCHLAB_TOL", 1e-6)),
            threads=_env_threads(),
        )

        # Try to load from YAML if it exists
        if os.path.exists(config_path):
            with open(config_path, "r") as f:
                config = yaml.safe_load(f)

            if config and isinstance(config, dict):
                analysis = config.get("analysis") or {}
                for key, value in analysis.items():
                    if hasattr(settings, key) and key != "grid":
                        setattr(settings, key, value)

                grid = config.get("grid") or {}
                if grid:
                    settings.grid = GridSpec(
                        radial=int(grid.get("radial", settings.grid.radial)),
                        angular=int(grid.get("angular", settings.grid.angular)),
                        clamp=float(grid.get("clamp", settings.grid.clamp)),
                    )

                ladder = config.get("ladder") or {}
                settings.ladder_kmax = int(ladder.get("kmax", settings.ladder_kmax))
                settings.assoc_nmax = int(ladder.get("assoc_nmax", settings.assoc_nmax))

            logger.info(f"Loaded configuration from {config_path}")
        else:
            logger.info("No config file found, using environment variables")
        return settings

    except Exception as e:
        logger.error(f"Error loading configuration: {e}")
        # Fall back to defaults if there's an error
        return AnalysisSettings()


@dataclass
class RunConfig:
    """
    One CLI invocation after flags have been merged over the loaded settings.

    Attributes:
        command: analyze, analyze-cphi, norms, sequence or verify
        u_text: Multiplier symbol text
        phi_text: Self-map text
        settings: Numerical settings
        out_path: JSON report path (stdout when None)
        csv_path: CSV ratio table path
    """
    command: str
    u_text: Optional[str] = None
    phi_text: Optional[str] = None
    settings: AnalysisSettings = field(default_factory=AnalysisSettings)
    out_path: Optional[str] = None
    csv_path: Optional[str] = None

    def validate(self) -> "RunConfig":
        settings = self.settings
        if settings.nmax < MIN_NMAX:
            raise ConfigError(f"nmax must be >= {MIN_NMAX}, got {settings.nmax}")
        if settings.grid.radial < MIN_GRID_DIM or settings.grid.angular < MIN_GRID_DIM:
            raise ConfigError(f"grid dimensions must be >= {MIN_GRID_DIM}, got {settings.grid}")
        if not 0.0 < settings.tol <= MAX_TOL:
            raise ConfigError(f"tol must lie in (0, {MAX_TOL}], got {settings.tol}")
        if settings.threads is not None and settings.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {settings.threads}")
        return self
