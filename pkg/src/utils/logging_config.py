"""
Logging configuration for the verification toolkit.

Centralizes logging setup with consistent formatting across all modules.
Reports go to stdout; everything logged here goes to stderr.
"""

import logging
import logging.handlers
from pathlib import Path
from typing import Optional

from pythonjsonlogger.json import JsonFormatter

_LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# Handlers installed by setup_logging, so a second call replaces them
_installed: list[logging.Handler] = []


def setup_logging(
    log_level: str = "INFO", log_file: Optional[str] = None, json_format: bool = False
) -> None:
    """
    Configure logging for the application.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Optional path to log file (logs to console if None)
        json_format: Emit one JSON object per record instead of plain text
    """
    # Create logs directory if needed
    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

    formatter: logging.Formatter
    if json_format:
        formatter = JsonFormatter(fmt=_LOG_FORMAT, datefmt=_DATE_FORMAT)
    else:
        formatter = logging.Formatter(fmt=_LOG_FORMAT, datefmt=_DATE_FORMAT)

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level.upper())

    for handler in _installed:
        root_logger.removeHandler(handler)
        handler.close()
    _installed.clear()

    # Console handler
    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)
    _installed.append(console_handler)

    # File handler (optional)
    if log_file:
        file_handler = logging.handlers.RotatingFileHandler(
            log_file, maxBytes=10485760, backupCount=5  # 10MB per file, keep 5 backups
        )
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)
        _installed.append(file_handler)
