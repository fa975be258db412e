import logging
import sys

from .config import Config


def setup_logger(name: str) -> logging.Logger:
    """Configure a stderr logger for the lab (stdout carries command output)."""
    logger = logging.getLogger(name)

    if not logger.handlers:
        level = getattr(logging, Config.LOG_LEVEL, logging.INFO)
        logger.setLevel(level)

        handler = logging.StreamHandler(sys.stderr)
        handler.setLevel(level)
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )
        handler.setFormatter(formatter)
        logger.addHandler(handler)
        logger.propagate = False

    return logger
