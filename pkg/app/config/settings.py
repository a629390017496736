"""
Application configuration settings
Loads environment variables from .env file
"""

from pydantic_settings import BaseSettings
from pydantic import ConfigDict
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


class Settings(BaseSettings):
    """Application settings loaded from environment variables"""
    model_config = ConfigDict(env_file=".env", case_sensitive=False, extra="ignore")

    # Application Settings
    app_name: str = "mckay-fold"
    app_version: str = "1.0.0"
    log_level: str = "INFO"

    # Root enumeration
    default_height: int = 12

    # Randomized checks
    random_seed: int = 0
    iso_retry_budget: int = 24
    iso_grid_radius: int = 2
    jacobi_samples: int = 1000
    form_samples: int = 1000
    identity_box: int = 3

    # Reports
    report_dir: str = "reports"
    record_timing: bool = False


# Create settings instance
settings = Settings()
