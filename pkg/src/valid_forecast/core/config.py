"""
Configuration settings for valid-forecast.
"""
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Application settings that can be loaded from environment variables or .env file.

    Defaults reproduce the illustrative election example: lambda=10, alpha=0.05.
    """
    model_config = SettingsConfigDict(
        env_prefix="VALID_FORECAST_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Logistic rule
    default_lambda: float = Field(10.0, gt=0)
    target_label: str = "T"
    # Decimals theta_hat is rounded to in naive missing-at-random reports
    theta_digits: Optional[int] = Field(3, ge=0)

    # Prediction sets
    default_alpha: float = Field(0.05, gt=0, lt=1)

    # Nonresponse ensembles
    default_grid_size: int = Field(2, ge=2)

    # Validity checks
    alpha_grid_points: int = Field(512, ge=1)
    alpha_grid_low: float = Field(0.001, gt=0, lt=1)
    alpha_grid_high: float = Field(0.999, gt=0, lt=1)
    curve_points: int = Field(1001, ge=2)
    enumeration_limit: int = Field(10_000_000, ge=1)

    # Monte Carlo
    monte_carlo_trials: int = Field(100_000, ge=1)
    default_seed: int = 20161108

    # Reporting
    json_decimals: int = Field(6, ge=0)

    # Logging
    log_level: str = "INFO"


# Create a global settings instance
settings = Settings()
