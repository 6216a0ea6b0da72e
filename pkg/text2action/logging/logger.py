"""Logging utilities for Text2Action."""

import json
import logging
import math
from datetime import datetime
from pathlib import Path
from typing import Any

from ..config import get_settings

# Configure base logs directory
BASE_LOGS_DIR = get_settings().log_dir

# Global logger instances and log files
_event_logger: logging.Logger | None = None
_metrics_logger: logging.Logger | None = None
_run_dir: Path | None = None
_event_log_file: Path | None = None
_metrics_log_file: Path | None = None


def _json_default(value: Any) -> Any:
    """Encode numpy scalars/arrays and paths that json cannot handle natively."""
    if hasattr(value, "tolist"):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def _new_run_dir() -> Path:
    timestamp = datetime.now().strftime("%Y-%m-%d_%H-%M-%S-%f")
    run_dir = BASE_LOGS_DIR / f"run_{timestamp}"
    run_dir.mkdir(parents=True, exist_ok=True)
    return run_dir


def initialize_run_log(command: str) -> Path:
    """Initialize the run log directory and files at the beginning of a command.

    Creates a timestamped folder with two log files:
    - events.log: pipeline and training events
    - metrics.log: one record per optimizer step

    Args:
        command: Name of the CLI command (or library entry point) starting the run.

    Returns:
        Path to the created run directory.
    """
    global _event_logger, _metrics_logger, _run_dir
    global _event_log_file, _metrics_log_file

    _run_dir = _new_run_dir()
    _event_log_file = _run_dir / "events.log"
    _metrics_log_file = _run_dir / "metrics.log"

    # Reset loggers to create new handlers
    _event_logger = None
    _metrics_logger = None

    event_logger = _setup_event_logger()
    _setup_metrics_logger()

    run_start = {
        "timestamp": datetime.now().isoformat(),
        "event": "run_start",
        "command": command,
    }
    event_logger.info(json.dumps(run_start))

    return _run_dir


def _file_logger(name: str, path: Path, fmt: str) -> logging.Logger:
    logger = logging.getLogger(name)
    logger.setLevel(logging.INFO)
    logger.propagate = False
    for handler in list(logger.handlers):
        handler.close()
    logger.handlers.clear()

    file_handler = logging.FileHandler(path, encoding="utf-8")
    file_handler.setLevel(logging.INFO)
    file_handler.setFormatter(logging.Formatter(fmt, datefmt="%Y-%m-%d %H:%M:%S"))
    logger.addHandler(file_handler)
    return logger


def _setup_event_logger() -> logging.Logger:
    """Set up the logger for pipeline and training events.

    Returns:
        Configured logger instance for events.
    """
    global _event_logger, _event_log_file, _run_dir

    if _event_logger is not None and _event_logger.handlers:
        return _event_logger

    if _event_log_file is None:
        if _run_dir is None:
            _run_dir = _new_run_dir()
        _event_log_file = _run_dir / "events.log"

    _event_logger = _file_logger(
        "text2action.events",
        _event_log_file,
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    return _event_logger


def _setup_metrics_logger() -> logging.Logger:
    """Set up the logger for per-step training metrics.

    Returns:
        Configured logger instance for metrics.
    """
    global _metrics_logger, _metrics_log_file, _run_dir

    if _metrics_logger is not None and _metrics_logger.handlers:
        return _metrics_logger

    if _metrics_log_file is None:
        if _run_dir is None:
            _run_dir = _new_run_dir()
        _metrics_log_file = _run_dir / "metrics.log"

    # Metrics lines are parsed back, so keep the prefix minimal.
    _metrics_logger = _file_logger("text2action.metrics", _metrics_log_file, "%(message)s")
    return _metrics_logger


def log_event(event: str, level: int = logging.INFO, **fields: Any) -> None:
    """Log a pipeline or training event to the event log.

    Args:
        event: Short event name (e.g. 'checkpoint_saved', 'probability_clamped')
        level: Logging level for the record
        **fields: Additional JSON-serialisable details
    """
    logger = _setup_event_logger()

    log_entry: dict[str, Any] = {
        "timestamp": datetime.now().isoformat(),
        "event": event,
        **fields,
    }

    # Log as JSON for easy parsing
    try:
        logger.log(level, json.dumps(log_entry, default=_json_default))
    except (TypeError, ValueError) as e:
        # Fallback to basic logging if JSON serialization fails
        logger.warning(f"Failed to log event as JSON: {e}")
        logger.log(level, f"Event: {event}, Fields: {fields}")


def log_step_metrics(phase: str, step: int, **metrics: float) -> None:
    """Log one optimizer step's metrics to the metrics log.

    Args:
        phase: 'pretrain' or 'gan'
        step: Step counter within the phase
        **metrics: Scalar metrics for the step; non-finite values are logged as strings
    """
    logger = _setup_metrics_logger()

    log_entry: dict[str, Any] = {"phase": phase, "step": step}
    for key, value in metrics.items():
        value = float(value)
        log_entry[key] = value if math.isfinite(value) else str(value)

    try:
        logger.info(json.dumps(log_entry))
    except (TypeError, ValueError) as e:
        logger.warning(f"Failed to log metrics as JSON: {e}")
        logger.info(f"Phase: {phase}, Step: {step}, Metrics: {metrics}")


def log_numeric_error(phase: str, step: int, message: str, dump_path: Path | None = None) -> None:
    """Log a non-finite training quantity that aborted a run.

    Args:
        phase: Training phase in which the failure happened
        step: Step counter at the failure
        message: Diagnostic message
        dump_path: Optional path of the diagnostic dump written for the batch
    """
    log_event(
        "numeric_error",
        level=logging.ERROR,
        phase=phase,
        step=step,
        message=message,
        dump_path=str(dump_path) if dump_path else None,
    )


def log_run_end() -> None:
    """Log run end to the event log."""
    logger = _setup_event_logger()

    run_end = {
        "timestamp": datetime.now().isoformat(),
        "event": "run_end",
    }

    logger.info(json.dumps(run_end))


def get_run_dir() -> Path | None:
    """Get the current run directory.

    Returns:
        Path to the current run directory, or None if not initialized.
    """
    return _run_dir
