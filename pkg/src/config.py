"""Configuration settings for the lingwalk lab."""
import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}


def _get_env(key: str, default: str = "") -> str:
    """Helper to get environment variables with multiple naming conventions."""
    val = (
        os.getenv(key) or
        os.getenv(f"APPSETTING_{key}") or
        os.getenv(key.upper()) or
        default
    )
    return val.strip() if isinstance(val, str) else val


class Config:
    """Lab configuration."""

    # Logging
    LOG_LEVEL = _get_env("LINGWALK_LOG_LEVEL", "INFO").upper()

    # Output
    OUTPUT_DIR = _get_env("LINGWALK_OUTPUT_DIR", "out")

    # Experiment defaults
    GRID = int(_get_env("LINGWALK_GRID", "101"))
    COUNT = int(_get_env("LINGWALK_COUNT", "200"))
    MAX_SWEEP = int(_get_env("LINGWALK_MAX_SWEEP", "14"))
    BATCH_SIZE = int(_get_env("LINGWALK_BATCH_SIZE", "4096"))

    # Numerical gates
    UNITARY_TOL = float(_get_env("LINGWALK_UNITARY_TOL", "1e-12"))

    @classmethod
    def validate(cls):
        """Validate configuration settings."""
        if cls.LOG_LEVEL not in _LEVELS:
            raise ValueError(f"LINGWALK_LOG_LEVEL must be one of {sorted(_LEVELS)}, got {cls.LOG_LEVEL!r}")
        if cls.GRID < 2:
            raise ValueError(f"LINGWALK_GRID must be at least 2, got {cls.GRID}")
        if cls.COUNT < 1:
            raise ValueError(f"LINGWALK_COUNT must be at least 1, got {cls.COUNT}")
        # 2^n inputs per length, held in memory a batch at a time
        if not 1 <= cls.MAX_SWEEP <= 14:
            raise ValueError(f"LINGWALK_MAX_SWEEP must be in 1..14, got {cls.MAX_SWEEP}")
        if cls.BATCH_SIZE < 1:
            raise ValueError(f"LINGWALK_BATCH_SIZE must be positive, got {cls.BATCH_SIZE}")
        if not 0 < cls.UNITARY_TOL < 1e-6:
            raise ValueError(f"LINGWALK_UNITARY_TOL must be in (0, 1e-6), got {cls.UNITARY_TOL}")
