"""
g2nu Configuration Module

Centralized configuration with validation and type safety.
Every setting can be overridden with a G2NU_-prefixed environment variable
or a .env file.
"""

import logging
from typing import Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class Settings(BaseSettings):
    """Application settings with validation."""

    # Environment
    ENVIRONMENT: Literal["development", "production", "test"] = Field(
        default="development",
        description="Runtime environment"
    )
    LOG_LEVEL: str = Field(default="INFO", description="Root log level")

    # Group generation
    ORDER_BOUND: int = Field(
        default=10_000,
        description="Largest group order or matrix order accepted during closure"
    )

    # Numeric embedding
    EMBEDDING_PRECISION: float = Field(
        default=1e-10,
        description="Max admissible residual of numeric lattice embeddings; also the shell grouping tolerance"
    )
    PRECISION_DIGITS: int = Field(
        default=40,
        description="mpmath working precision (decimal digits) for numeric witnesses"
    )
    RECONSTRUCTION_WINDOW: float = Field(
        default=1e-9,
        description="Acceptance window for rational reconstruction of numeric totals"
    )

    # Oracle
    ORACLE_SHELLS: int = Field(default=10, description="Dual shells checked per element")
    ORACLE_SHELL_TOLERANCE: float = Field(default=1e-8, description="Per-shell trace tolerance")
    EISENSTEIN_A_MAX: int = Field(default=24, description="Largest a in the Eisenstein sweep")
    TRIG_SAMPLES: int = Field(default=500, description="Random triples in the trig-identity sweep")
    TRIG_SEED: int = Field(default=0, description="Seed for the trig-identity sweep")

    # Reporting
    ELL_PARITY: Literal["even", "odd"] = Field(
        default="even",
        description="Resolution parity used for the Examples 1-6 variants in reports"
    )
    WORKERS: int = Field(default=1, description="Thread pool size for per-example report work")

    model_config: SettingsConfigDict = {
        "case_sensitive": False,
        "env_file": ".env",
        "env_prefix": "G2NU_",
        "extra": "ignore"
    }

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, v: str, info) -> str:
        level = v.upper()
        if level not in _LOG_LEVELS:
            raise ValueError(f"LOG_LEVEL must be one of {', '.join(_LOG_LEVELS)}")
        return level

    @field_validator("EMBEDDING_PRECISION", "RECONSTRUCTION_WINDOW", "ORACLE_SHELL_TOLERANCE")
    @classmethod
    def validate_tolerance(cls, v: float, info) -> float:
        if not 0 < v < 1:
            raise ValueError(f"{info.field_name} must lie strictly between 0 and 1")
        return v

    @field_validator("ORDER_BOUND", "PRECISION_DIGITS", "ORACLE_SHELLS", "WORKERS", "TRIG_SAMPLES")
    @classmethod
    def validate_positive(cls, v: int, info) -> int:
        if v < 1:
            raise ValueError(f"{info.field_name} must be positive")
        return v

    @field_validator("EISENSTEIN_A_MAX")
    @classmethod
    def validate_a_max(cls, v: int, info) -> int:
        if v < 2:
            raise ValueError("EISENSTEIN_A_MAX must be at least 2")
        return v

    @property
    def is_production(self) -> bool:
        """Check if running in production."""
        return self.ENVIRONMENT == "production"

    @property
    def log_level(self) -> int:
        """Numeric log level for logging.basicConfig."""
        return int(getattr(logging, self.LOG_LEVEL))


# Global settings instance
_settings: Settings | None = None


def get_settings() -> Settings:
    """Get or create settings singleton."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Drop the cached singleton so the next call re-reads the environment."""
    global _settings
    _settings = None


def validate_required_settings() -> None:
    """Validate cross-field constraints the per-field validators cannot see."""
    settings = get_settings()
    errors = []

    if settings.RECONSTRUCTION_WINDOW < settings.EMBEDDING_PRECISION:
        errors.append("  - RECONSTRUCTION_WINDOW must not be tighter than EMBEDDING_PRECISION")
    if settings.ORACLE_SHELL_TOLERANCE < settings.EMBEDDING_PRECISION:
        errors.append("  - ORACLE_SHELL_TOLERANCE must not be tighter than EMBEDDING_PRECISION")
    # 10^-precision must sit well below every tolerance it witnesses
    if 10.0 ** (-settings.PRECISION_DIGITS) > settings.EMBEDDING_PRECISION * 1e-3:
        errors.append("  - PRECISION_DIGITS too small for EMBEDDING_PRECISION")

    if errors:
        raise RuntimeError("Invalid configuration:\n" + "\n".join(errors))
