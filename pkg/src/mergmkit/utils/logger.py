"""
Logging configuration for mergmkit.

Modules log through ``get_logger(__name__)``, i.e. children of the package
logger configured here. Handlers are attached once; later calls only
change the level or add a log file.
"""

import logging
import sys
from pathlib import Path
from typing import Optional, Union

LOGGER_NAME = "mergmkit"
DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

_logger: Optional[logging.Logger] = None


def _add_file_handler(logger: logging.Logger, log_file: Union[str, Path], formatter: logging.Formatter) -> None:
    path = Path(log_file).resolve()
    for handler in logger.handlers:
        if isinstance(handler, logging.FileHandler) and Path(handler.baseFilename) == path:
            return
    path.parent.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(path, encoding="utf-8")
    handler.setFormatter(formatter)
    logger.addHandler(handler)


def setup_logger(
    level: str = "INFO",
    log_file: Optional[Union[str, Path]] = None,
    format_string: Optional[str] = None,
) -> logging.Logger:
    """
    Configure the package logger.

    Args:
        level: DEBUG, INFO, WARNING, ERROR or CRITICAL; applied on every call
        log_file: Optional file receiving the same records as stderr
        format_string: Record format used when handlers are first created

    Returns:
        The ``mergmkit`` logger
    """
    global _logger

    formatter = logging.Formatter(format_string or DEFAULT_FORMAT)
    if _logger is None:
        _logger = logging.getLogger(LOGGER_NAME)
        _logger.propagate = False
        # stdout carries the result tables
        stream = logging.StreamHandler(sys.stderr)
        stream.setFormatter(formatter)
        _logger.addHandler(stream)

    if log_file:
        _add_file_handler(_logger, log_file, formatter)
    _logger.setLevel(getattr(logging, level.upper()))
    return _logger


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """The package logger (set up with defaults on first use) or one of its children."""
    logger = _logger if _logger is not None else setup_logger()
    if name and name.startswith(LOGGER_NAME + "."):
        name = name[len(LOGGER_NAME) + 1:]
    return logger.getChild(name) if name and name != LOGGER_NAME else logger
