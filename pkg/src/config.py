"""
Configuration file that manages environment specific settings by making configuration profiles
that allow us to run different environments as required (i.e. DevConfig for development,
TestConfig for testing). Safely loads environment variables from .env without exposing them.
"""

import os
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()

ROOT_DIR = Path(__file__).resolve().parent.parent  # Repository root, one above src/


class Config:
    """Base configuration class. Settings from this class are used across all configurations."""

    # Directory commands write into when neither --out nor [run] output_dir is given
    OUTPUT_DIR = os.getenv("WEC_OUTPUT_DIR", "output")
    SEED = int(os.getenv("WEC_SEED", "0"))  # Multistart seed unless [run] seed overrides
    WORKERS = int(os.getenv("WEC_WORKERS", "1"))  # Sweep worker processes, 1 = in process
    LOG_LEVEL = os.getenv("WEC_LOG_LEVEL", "INFO")
    # Where the shipped coefficient fixtures live
    FIXTURE_DIR = os.getenv("WEC_FIXTURE_DIR", str(ROOT_DIR / "data"))


class DevConfig(Config):  # Inherits from Config
    """Development configuration. Settings from this class are used in development environment."""

    # Use every core for sweeps unless told otherwise
    WORKERS = int(os.getenv("WEC_WORKERS", str(os.cpu_count() or 1)))


class TestConfig(Config):  # Inherits from Config
    """Testing configuration. Settings from this class are used in pytest environment."""

    LOG_LEVEL = "WARNING"  # Keep test output quiet
    WORKERS = 1  # Sweeps stay in process so failures show real tracebacks
    SEED = 0
