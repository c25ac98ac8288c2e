"""
Configuration settings for the numerical-radius geometry toolkit.
"""

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings, read from WGEO_* environment variables or a local .env file."""

    # Parallelism
    threads: int = 1

    # Tolerances (float mode only; exact mode uses zero slack)
    space_tolerance: float = 1e-10
    attainment_rel_tol: float = 1e-9
    zero_tol: float = 1e-9
    gap_tol: float = 1e-8
    pivot_tol: float = 1e-10

    # Canonical data
    dedup_digits: int = 12

    # Logging
    log_level: str = "WARNING"

    model_config = SettingsConfigDict(env_prefix="WGEO_", env_file=".env", extra="ignore")

    @field_validator("threads")
    @classmethod
    def clamp_threads(cls, value: int) -> int:
        return max(1, value)


# Global settings instance
settings = Settings()
