from .logger import get_logger, setup_logging, LoggerMixin, run_context
from .exceptions import LabError, ExceptionHandler, get_exit_code

__all__ = ["get_logger", "setup_logging", "LoggerMixin", "run_context", "LabError", "ExceptionHandler",
           "get_exit_code"]
