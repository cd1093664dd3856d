"""Lab logging: console on stderr, optional rotating file, JSON records with run fields.

Run fields (experiment, run id, seed, genus, curve) are bound with
``run_context`` and attached to every record emitted inside the block, so a
JSON log of a sweep can be grouped by curve or seed without parsing messages.
"""
import json
import logging
import sys
import uuid
from contextlib import contextmanager
from contextvars import ContextVar
from datetime import datetime, timezone
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, Dict, Iterator, Optional

RUN_FIELDS = ("experiment", "run", "seed", "genus", "curve")
TEXT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s%(run_suffix)s"

_run_fields: ContextVar[Dict[str, Any]] = ContextVar("schiffer_lab_run_fields", default={})


def new_run_id() -> str:
    return uuid.uuid4().hex[:12]


def current_run_fields() -> Dict[str, Any]:
    return dict(_run_fields.get())


@contextmanager
def run_context(**fields: Any) -> Iterator[Dict[str, Any]]:
    """Bind run fields for the duration of the block; nested blocks extend the outer ones"""
    merged = {**_run_fields.get(), **{k: v for k, v in fields.items() if v is not None}}
    token = _run_fields.set(merged)
    try:
        yield merged
    finally:
        _run_fields.reset(token)


class RunContextFilter(logging.Filter):
    """Copies the bound run fields onto each record"""

    def filter(self, record: logging.LogRecord) -> bool:
        fields = _run_fields.get()
        record.run_fields = dict(fields)
        record.run_suffix = ""
        if fields:
            ordered = [f"{key}={fields[key]}" for key in RUN_FIELDS if key in fields]
            record.run_suffix = " [" + " ".join(ordered) + "]"
        return True


class JSONFormatter(logging.Formatter):
    """One JSON object per record; run fields first, then per-call context"""

    def format(self, record: logging.LogRecord) -> str:
        entry: Dict[str, Any] = {
            "timestamp": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "line": record.lineno,
        }
        entry.update(getattr(record, "run_fields", {}))
        entry.update(getattr(record, "extra_fields", {}))
        if record.exc_info:
            entry["exception"] = self.formatException(record.exc_info)
        if hasattr(record, "exception_chain"):
            entry["exception_chain"] = record.exception_chain
        return json.dumps(entry, default=str)


class ColoredFormatter(logging.Formatter):
    """Colored level names for terminal output"""

    COLORS = {
        'DEBUG': '\033[36m',
        'INFO': '\033[32m',
        'WARNING': '\033[33m',
        'ERROR': '\033[31m',
        'CRITICAL': '\033[35m',
    }
    RESET = '\033[0m'

    def format(self, record: logging.LogRecord) -> str:
        if not hasattr(record, "run_suffix"):
            record.run_suffix = ""
        color = self.COLORS.get(record.levelname, '')
        saved = record.levelname
        record.levelname = f"{color}{record.levelname}{self.RESET}"
        try:
            return super().format(record)
        finally:
            record.levelname = saved


def setup_logging(
    log_level: str = "INFO",
    log_file: Optional[str] = None,
    use_json: bool = False,
    max_bytes: int = 10_000_000,
    backup_count: int = 5
) -> None:
    """
    Configure the root logger for a lab session

    Console output goes to stderr so structured results on stdout stay
    machine readable. Every handler carries a RunContextFilter.

    Args:
        log_level: Logging level name
        log_file: Optional rotating log file
        use_json: JSON records instead of text lines
        max_bytes: Size before the log file rotates
        backup_count: Rotated files to keep
    """
    level = getattr(logging, log_level.upper(), logging.INFO)
    root_logger = logging.getLogger()
    root_logger.handlers.clear()
    root_logger.setLevel(level)

    context_filter = RunContextFilter()
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(JSONFormatter() if use_json else ColoredFormatter(TEXT_FORMAT))
    handlers = [console_handler]

    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        file_handler = RotatingFileHandler(log_file, maxBytes=max_bytes, backupCount=backup_count)
        file_handler.setFormatter(JSONFormatter() if use_json else logging.Formatter(TEXT_FORMAT))
        handlers.append(file_handler)

    for handler in handlers:
        handler.setLevel(level)
        handler.addFilter(context_filter)
        root_logger.addHandler(handler)


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)


class LoggerMixin:
    """Class-named logger plus records that carry extra context fields"""

    @property
    def logger(self) -> logging.Logger:
        if not hasattr(self, '_logger'):
            self._logger = get_logger(f"schiffer_lab.{self.__class__.__name__}")
        return self._logger

    def log_with_context(self, level: str, message: str, **context: Any) -> None:
        numeric_level = getattr(logging, level.upper())
        if self.logger.isEnabledFor(numeric_level):
            self.logger.log(numeric_level, message, extra={"extra_fields": context}, stacklevel=2)
