from typing import Optional
from pydantic import AliasChoices, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="allow",
        populate_by_name=True,
    )

    app_name: str = "hoharmonic"
    environment: str = Field(
        default="development",
        validation_alias=AliasChoices("ENV", "ENVIRONMENT"),
    )
    log_level: str = Field(default="INFO", validation_alias=AliasChoices("LOG_LEVEL"))

    # Series truncation defaults
    series_max_height: int = Field(
        default=40, validation_alias=AliasChoices("HO_MAX_HEIGHT")
    )
    series_height_limit: int = Field(
        default=1280, validation_alias=AliasChoices("HO_HEIGHT_LIMIT")
    )
    tail_tol: float = Field(default=1e-10, validation_alias=AliasChoices("HO_TAIL_TOL"))
    wall_margin: float = Field(
        default=1e-2, validation_alias=AliasChoices("HO_WALL_MARGIN")
    )
    resonance_tol: float = Field(
        default=1e-8, validation_alias=AliasChoices("HO_RESONANCE_TOL")
    )
    precision_tol: float = Field(
        default=1e-8, validation_alias=AliasChoices("HO_PRECISION_TOL")
    )
    weyl_cap: int = Field(default=200_000, validation_alias=AliasChoices("HO_WEYL_CAP"))
    max_cone_points: int = Field(
        default=2_000_000, validation_alias=AliasChoices("HO_MAX_CONE_POINTS")
    )

    # Coefficient cache
    cache_size: int = Field(default=256, validation_alias=AliasChoices("HO_CACHE_SIZE"))
    cache_dir: Optional[str] = Field(
        default=None,
        validation_alias=AliasChoices("HO_CACHE_DIR", "CACHE_DIR"),
    )
    cache_ttl: int = Field(default=86_400, validation_alias=AliasChoices("HO_CACHE_TTL"))
    redis_enabled: bool = Field(
        default=False, validation_alias=AliasChoices("REDIS_ENABLED")
    )
    redis_host: str = Field(
        default="localhost", validation_alias=AliasChoices("REDIS_HOST")
    )
    redis_port: int = Field(default=6379, validation_alias=AliasChoices("REDIS_PORT"))
    redis_namespace: str = Field(
        default="hoharmonic", validation_alias=AliasChoices("REDIS_NAMESPACE")
    )

    threads: int = Field(default=1, validation_alias=AliasChoices("HO_THREADS"))

    @field_validator("environment", mode="before")
    @classmethod
    def normalize_environment(cls, value):
        """Lower-case the environment name."""
        return str(value).lower()

    @property
    def is_production(self) -> bool:
        """Check if the current environment is production."""
        return self.environment == "production"

    @property
    def is_test(self) -> bool:
        """Check if the current environment is test."""
        return self.environment == "test"


def get_settings() -> Settings:
    """Get application settings from the environment and an optional .env file."""
    return Settings()
