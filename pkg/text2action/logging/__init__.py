"""Logging module for Text2Action."""

from .logger import (
    get_run_dir,
    initialize_run_log,
    log_event,
    log_numeric_error,
    log_run_end,
    log_step_metrics,
)

__all__ = [
    "initialize_run_log",
    "log_event",
    "log_step_metrics",
    "log_numeric_error",
    "log_run_end",
    "get_run_dir",
]
