"""
Logging configuration for the ATL model checker.
"""

import logging
import sys
from pathlib import Path

from ..config import LOG_FILE, LOG_LEVEL

# Loggers created through setup_logger, by name
_LOGGERS = {}


def setup_logger(name='atl', log_file=None, level=None):
    """
    Set up a logger with console and file handlers.

    Console output goes to stderr: stdout is reserved for result documents.

    Args:
        name: Logger name
        log_file: Path to log file (optional, defaults to ATL_LOG_FILE)
        level: Logging level (defaults to ATL_LOG_LEVEL)

    Returns:
        Configured logger instance
    """
    if level is None:
        level = LOG_LEVEL
    if log_file is None:
        log_file = LOG_FILE

    logger = logging.getLogger(name)
    logger.setLevel(level)
    _LOGGERS[name] = logger

    # Avoid adding handlers multiple times
    if logger.handlers:
        return logger

    logger.propagate = False

    # Create formatter
    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # Console handler
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    # File handler (if log_file specified)
    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def set_verbosity(level):
    """Apply a level to every logger created through setup_logger."""
    for logger in _LOGGERS.values():
        logger.setLevel(level)
