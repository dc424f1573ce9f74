"""Tests for logging configuration."""

import json
import logging
import sys

import pytest

from utils.logging_config import JsonFormatter, RunContextFilter, configure_logging


@pytest.fixture
def restore_root_logger():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield root
    for handler in list(root.handlers):
        root.removeHandler(handler)
    for handler in handlers:
        root.addHandler(handler)
    root.setLevel(level)


class TestJsonFormatter:
    """Test cases for the JSON log formatter."""

    def test_record_fields(self):
        """One JSON object per record with the run id."""
        record = logging.LogRecord("services.lawson_service", logging.WARNING, __file__, 1, "gap %s", ("1e-2",), None)
        RunContextFilter("run-7").filter(record)

        payload = json.loads(JsonFormatter().format(record))

        assert payload["level"] == "WARNING"
        assert payload["logger"] == "services.lawson_service"
        assert payload["run_id"] == "run-7"
        assert payload["message"] == "gap 1e-2"
        assert "exception" not in payload

    def test_exception_is_included(self):
        """Tracebacks are rendered into the payload."""
        try:
            raise ValueError("boom")
        except ValueError:
            record = logging.LogRecord("worker", logging.ERROR, __file__, 1, "failed", (), sys.exc_info())

        payload = json.loads(JsonFormatter().format(record))

        assert "ValueError: boom" in payload["exception"]


class TestConfigureLogging:
    """Test cases for configure_logging."""

    def test_generates_run_id(self, restore_root_logger):
        """A run id is generated when none is given."""
        run_id = configure_logging()

        assert len(run_id) == 36
        assert len(restore_root_logger.handlers) == 1

    def test_level_from_environment(self, monkeypatch, restore_root_logger):
        """LAB_LOG_LEVEL sets the root level."""
        monkeypatch.setenv("LAB_LOG_LEVEL", "debug")

        configure_logging(run_id="run-1")

        assert restore_root_logger.level == logging.DEBUG

    def test_text_format(self, monkeypatch, restore_root_logger):
        """LAB_LOG_FORMAT=text selects the plain formatter."""
        monkeypatch.setenv("LAB_LOG_FORMAT", "text")

        configure_logging(run_id="run-2", level="WARNING")

        handler = restore_root_logger.handlers[0]
        assert not isinstance(handler.formatter, JsonFormatter)
        assert restore_root_logger.level == logging.WARNING
