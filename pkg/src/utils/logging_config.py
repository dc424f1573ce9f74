"""Structured logging setup shared by the CLI and the sweep worker."""

import json
import logging
import os
import uuid
from datetime import datetime, timezone
from typing import Optional


class RunContextFilter(logging.Filter):
    """Attach the run correlation id to every record."""

    def __init__(self, run_id: str):
        super().__init__()
        self.run_id = run_id

    def filter(self, record: logging.LogRecord) -> bool:
        record.run_id = self.run_id
        return True


class JsonFormatter(logging.Formatter):
    """Render log records as one JSON object per line."""

    def format(self, record: logging.LogRecord) -> str:
        payload = {
            "timestamp": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "run_id": getattr(record, "run_id", None),
            "message": record.getMessage(),
        }
        if record.exc_info:
            payload["exception"] = self.formatException(record.exc_info)
        return json.dumps(payload)


def configure_logging(run_id: Optional[str] = None, level: Optional[str] = None) -> str:
    """
    Configure the root logger for a laboratory run.

    Args:
        run_id: Correlation id stamped on every record (generated when omitted)
        level: Log level name, defaults to LAB_LOG_LEVEL or INFO

    Returns:
        The run id in use
    """
    run_id = run_id or str(uuid.uuid4())
    level = level or os.getenv("LAB_LOG_LEVEL", "INFO")
    log_format = os.getenv("LAB_LOG_FORMAT", "json").lower()

    handler = logging.StreamHandler()
    if log_format == "json":
        handler.setFormatter(JsonFormatter())
    else:
        handler.setFormatter(
            logging.Formatter("%(asctime)s %(levelname)s [%(run_id)s] %(name)s: %(message)s")
        )
    handler.addFilter(RunContextFilter(run_id))

    root = logging.getLogger()
    for existing in list(root.handlers):
        root.removeHandler(existing)
    root.addHandler(handler)
    root.setLevel(level.upper())
    return run_id
