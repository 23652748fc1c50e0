from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Output Settings
    OUTPUT_DIR: str = "./results"  # Default directory for run/sweep artifacts

    # Application Settings
    DATABASE_URL: str = "sqlite:///./wlan_positioning.db"
    API_V1_STR: str = "/api"
    LOG_LEVEL: str = "INFO"

    # Environment
    ENVIRONMENT: str = "development"  # development or production

    # Solver Settings
    MAX_WORKERS: int = 1
    DEFAULT_MASTER_SEED: int = 2024
    DEFAULT_SAP_STEPS: int = 1000  # Step count k
    ORACLE_MAX_PROFILES: int = 250_000

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = True
        # Allow missing .env file in production
        extra = "allow"


# Initialize settings
settings = Settings()
