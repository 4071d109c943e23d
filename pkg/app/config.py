"""Configuration management using Pydantic Settings.

Only process-level behaviour lives here (logging, worker pool, preset
location). Economic parameters always come from scenario INI files so that
outputs never depend on the environment.
"""
from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

_REPO_ROOT = Path(__file__).resolve().parent.parent


class Settings(BaseSettings):
    """Application settings loaded from ``TESC_``-prefixed environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="TESC_",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging
    log_level: str = "WARNING"
    log_json: bool = False

    # Sweeps
    default_jobs: int = Field(default=1, ge=1)

    # Figure presets
    presets_dir: Path = _REPO_ROOT / "configs"


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
