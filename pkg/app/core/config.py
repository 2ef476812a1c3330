from pydantic_settings import BaseSettings
from functools import lru_cache


class Settings(BaseSettings):
    APP_NAME: str = "SSET Explainer"
    ENV: str = "dev"
    LOG_LEVEL: str = "INFO"
    DEFAULT_SEED: int = 0
    DEFAULT_JOBS: int = 1
    # Sharpness of the builtin centroid classifier (`--oracle builtin`)
    CENTROID_TEMPERATURE: float = 5.0
    ORACLE_SHUTDOWN_TIMEOUT: float = 10.0

    class Config:
        env_file = ".env"
        case_sensitive = True


@lru_cache
def get_settings() -> Settings:
    return Settings()
