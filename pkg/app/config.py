"""
Toolkit Configuration
Application defaults; explicit values only, the environment is not consulted
"""

from pathlib import Path
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

PROJECT_ROOT = Path(__file__).resolve().parent.parent


class Settings(BaseSettings):
    """Application settings"""

    model_config = SettingsConfigDict(case_sensitive=False, extra="ignore")

    # App Configuration
    app_name: str = "Basaa Orthography Toolkit"
    app_version: str = "0.1.0"
    log_level: str = Field(default="INFO")

    # Reproducibility
    default_seed: int = Field(default=13)

    # Shipped data
    profiles_dir: Path = Field(default=PROJECT_ROOT / "data" / "profiles")
    rules_dir: Path = Field(default=PROJECT_ROOT / "data" / "rules")
    sweeps_dir: Path = Field(default=PROJECT_ROOT / "data" / "sweeps")

    # Artifacts
    checkpoint_format_version: int = Field(default=1)
    report_decimals: int = Field(default=4)

    # Training verification
    gradcheck_tolerance: float = Field(default=1e-4)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls,
        init_settings,
        env_settings,
        dotenv_settings,
        file_secret_settings,
    ):
        # Only explicit constructor values; no env vars, no .env file
        return (init_settings,)


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()


# Convenience instance
settings = get_settings()
