"""Logging utilities for the SemiLab system.

This module provides logging configuration and helper functions
for consistent logging across the numeric modules, scenarios and CLI.
"""
import logging
import sys
from typing import Optional

from config.settings import LOG_FORMAT, LOG_LEVEL

ROOT_LOGGER = "semilab"


def configure_logger(
    logger_name: str = ROOT_LOGGER,
    level: Optional[str] = None,
    log_format: Optional[str] = None
) -> logging.Logger:
    """Configure and return a logger with consistent formatting.

    Records go to stderr; stdout is reserved for CLI verdict lines.

    Args:
        logger_name: Name for the logger.
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL).
            Defaults to ``SEMILAB_LOG_LEVEL``.
        log_format: Custom log format string.

    Returns:
        Configured logger instance.
    """
    # Convert string level to logging constant
    numeric_level = getattr(logging, (level or LOG_LEVEL).upper(), logging.INFO)

    logger = logging.getLogger(logger_name)
    logger.setLevel(numeric_level)

    # Add console handler if none exists
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(log_format or LOG_FORMAT))
        logger.addHandler(handler)

    return logger


def get_logger(component: str) -> logging.Logger:
    """Return a child of the ``semilab`` logger for a component.

    Child loggers carry no handler of their own and propagate to the
    root logger configured by :func:`configure_logger`.

    Args:
        component: Dotted component name, e.g. ``"spectral"``.

    Returns:
        The ``semilab.<component>`` logger.
    """
    return logging.getLogger(f"{ROOT_LOGGER}.{component}")
