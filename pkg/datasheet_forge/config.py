from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class RiskSettings(BaseSettings):
    imbalance_max_share: float = Field(default=0.8, gt=0.0, le=1.0)
    staleness_years: int = Field(default=5, ge=0)
    fraction_gap_min: float = Field(default=0.9, ge=0.0, le=1.0)

    model_config = SettingsConfigDict(
        env_prefix="DATASHEET_FORGE_RISK_", extra="ignore", frozen=True
    )


class ExportSettings(BaseSettings):
    base_iri: str = "https://datasheet-forge.example/datasets/datasheet"

    model_config = SettingsConfigDict(env_prefix="DATASHEET_FORGE_EXPORT_", extra="ignore")


class LogSettings(BaseSettings):
    level: str = "WARNING"
    format: str = "%(asctime)s %(levelname)s %(message)s"

    model_config = SettingsConfigDict(env_prefix="DATASHEET_FORGE_LOG_", extra="ignore")


class Settings(BaseSettings):
    risk: RiskSettings = Field(default_factory=RiskSettings)
    export: ExportSettings = Field(default_factory=ExportSettings)
    log: LogSettings = Field(default_factory=LogSettings)

    model_config = SettingsConfigDict(env_prefix="", extra="ignore")


settings = Settings()
