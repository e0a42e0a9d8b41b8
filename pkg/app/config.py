from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """
    Engine settings loaded from environment variables.

    Pydantic loads values from:
    1. Environment variables (prefix STRAT_)
    2. .env file
    3. Default values defined here
    """

    # Truncation settings
    default_truncation: int = 8
    default_depth: int = 6
    default_field: str = "Q"

    # Bounded search budget for algebra isomorphism tests
    iso_search_bound: int = 20000

    # Report settings
    report_schema_version: str = "1.0"

    # App settings
    app_name: str = "Stratified Algebra Engine"
    debug: bool = False
    log_level: str = "WARNING"

    class Config:
        env_prefix = "STRAT_"
        env_file = ".env"


# Global settings instance
settings = Settings()
