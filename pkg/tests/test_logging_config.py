"""Tests for logging setup"""

import logging
import logging.handlers

import pytest
from pythonjsonlogger.json import JsonFormatter

from src.utils import logging_config
from src.utils.logging_config import setup_logging


@pytest.fixture(autouse=True)
def restore_logging():
    yield
    setup_logging("WARNING")


def installed_handlers():
    root = logging.getLogger()
    return [h for h in logging_config._installed if h in root.handlers]


def test_setup_is_idempotent():
    """Test a second call replaces the handlers of the first."""
    setup_logging("DEBUG")
    first = list(logging_config._installed)
    setup_logging("INFO")
    root = logging.getLogger()
    assert not any(h in root.handlers for h in first)
    assert root.level == logging.INFO
    assert len(installed_handlers()) == 1


def test_json_format():
    """Test json_format switches the console formatter."""
    setup_logging("INFO", json_format=True)
    (handler,) = installed_handlers()
    assert isinstance(handler.formatter, JsonFormatter)


def test_log_file_creates_directory(tmp_path):
    """Test the log file directory is created and a rotating handler added."""
    log_file = tmp_path / "logs" / "synchro.log"
    setup_logging("INFO", str(log_file))
    logging.getLogger("src.test").info("explored 3 configurations")
    assert log_file.parent.is_dir()
    rotating = [
        h for h in installed_handlers() if isinstance(h, logging.handlers.RotatingFileHandler)
    ]
    assert len(rotating) == 1
    rotating[0].flush()
    assert "explored 3 configurations" in log_file.read_text()
