"""Shared fixtures: every test logs into its own temporary directory."""

import pytest

from text2action.logging import logger as log_module


@pytest.fixture(autouse=True)
def temp_logs_dir(tmp_path, monkeypatch):
    """Route run logs to tmp_path and forget any logger state from earlier tests."""
    logs_dir = tmp_path / "logs"
    logs_dir.mkdir(parents=True)
    monkeypatch.setattr(log_module, "BASE_LOGS_DIR", logs_dir)
    for name in (
        "_event_logger",
        "_metrics_logger",
        "_run_dir",
        "_event_log_file",
        "_metrics_log_file",
    ):
        monkeypatch.setattr(log_module, name, None)
    return logs_dir
