"""
Configuration management using pydantic-settings for the PPV certificate toolkit.
"""

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

_LEVELS = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG", "NOTSET")


class Settings(BaseSettings):
    """Application settings with environment variable support."""

    model_config = SettingsConfigDict(
        env_prefix="PPV_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Application Configuration
    log_level: str = Field(default="WARNING")
    debug: bool = Field(default=False)

    # Certificate output
    json_indent: int = Field(default=2, ge=0)
    verify_on_emit: bool = Field(default=True)

    # Solver limits
    max_system_columns: int = Field(default=4000, ge=1)

    # Property suites
    random_seed: int = Field(default=20240601)

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Ensure the log level is one the logging module knows."""
        level = v.strip().upper()
        if level not in _LEVELS:
            raise ValueError(f"Unknown log level: {v}")
        return level


# Global settings instance
settings = Settings()
