"""Configuration module for Text2Action."""

from .config import (
    DESK_PROFILE,
    PAPER_PROFILE,
    PROFILES,
    RunConfig,
    Settings,
    TrainingConfig,
    get_settings,
    load_config_file,
    resolve_run_config,
    save_run_config,
)

__all__ = [
    "DESK_PROFILE",
    "PAPER_PROFILE",
    "PROFILES",
    "RunConfig",
    "Settings",
    "TrainingConfig",
    "get_settings",
    "load_config_file",
    "resolve_run_config",
    "save_run_config",
]
