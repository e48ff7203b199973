"""
Application configuration settings using Pydantic Settings.
All configuration values can be overridden via environment variables prefixed with ``CRVN_``.
"""
from typing import Tuple

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Application settings.

    These values are read from environment variables with fallback to .env file.
    """

    # Application Info
    PROJECT_NAME: str = "CR Virtual Network Mapper"
    VERSION: str = "0.1.0"

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"

    # Numerical tolerances
    SHARE_TOLERANCE: float = 1e-9
    QUAD_EPSREL: float = 1e-8
    QUAD_TAIL_MASS: float = 1e-12
    DOMINANCE_TOLERANCE: float = 1e-12

    # Mapper
    EXHAUSTIVE_BUDGET: int = 2_000_000
    MOVE_BUDGET: int = 10_000
    DEFAULT_WEIGHTS: Tuple[float, float, float] = (1.0, 1.0, 1.0)

    # Oracles
    ORACLE_SAMPLES: int = 1_000_000
    ORACLE_BATCH_SIZE: int = 100_000
    ORACLE_SIGMA: float = 3.0
    CTMC_HORIZON_S: float = 1e5
    CTMC_BATCHES: int = 50
    DEFAULT_SEED: int = 2024

    # Execution
    WORKERS: int = 1

    # Output
    CSV_SIGNIFICANT_DIGITS: int = 12

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def normalize_log_level(cls, v: str) -> str:
        """Accept lower-case level names."""
        level = str(v).upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level: {v}")
        return level

    @field_validator(
        "SHARE_TOLERANCE",
        "QUAD_EPSREL",
        "QUAD_TAIL_MASS",
        "DOMINANCE_TOLERANCE",
        "ORACLE_SIGMA",
        "CTMC_HORIZON_S",
    )
    @classmethod
    def validate_positive_float(cls, v: float) -> float:
        """Tolerances and horizons must be strictly positive."""
        if v <= 0:
            raise ValueError("must be positive")
        return v

    @field_validator(
        "EXHAUSTIVE_BUDGET",
        "MOVE_BUDGET",
        "ORACLE_SAMPLES",
        "ORACLE_BATCH_SIZE",
        "CTMC_BATCHES",
        "WORKERS",
        "CSV_SIGNIFICANT_DIGITS",
    )
    @classmethod
    def validate_positive_int(cls, v: int) -> int:
        """Budgets and counts must be at least one."""
        if v < 1:
            raise ValueError("must be at least 1")
        return v

    @field_validator("DEFAULT_WEIGHTS")
    @classmethod
    def validate_weights(cls, v: Tuple[float, float, float]) -> Tuple[float, float, float]:
        """Scalarization weights are nonnegative and not all zero."""
        if any(w < 0 for w in v) or not any(w > 0 for w in v):
            raise ValueError("weights must be nonnegative and not all zero")
        return v

    model_config = SettingsConfigDict(
        env_prefix="CRVN_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )


# Create global settings instance
settings = Settings()
