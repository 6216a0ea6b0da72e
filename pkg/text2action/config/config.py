"""Configuration management for Text2Action."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Literal

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from ..errors import ConfigError

# Load environment variables from .env file
load_dotenv()

ProfileName = Literal["desk", "paper"]


class Settings(BaseSettings):
    """Application settings loaded from ``TEXT2ACTION_*`` environment variables."""

    model_config = SettingsConfigDict(env_prefix="TEXT2ACTION_", env_file=".env", extra="ignore")

    log_dir: Path = Path.home() / ".config" / "text2action" / "logs"
    profile: ProfileName = "desk"
    config_file: Path | None = None


# Global settings instance
_settings: Settings | None = None


def get_settings() -> Settings:
    """Get or create the global settings instance.

    Returns:
        Settings instance
    """
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


class TrainingConfig(BaseModel):
    """Model dimensions and optimisation hyperparameters."""

    model_config = ConfigDict(extra="forbid")

    n: int = Field(16, ge=1, description="hidden size of every LSTM cell")
    n_z: int = Field(4, ge=1, description="noise dimension")
    n_e: int = Field(8, ge=2, description="word embedding dimension")
    n_x: int = Field(24, ge=1, description="pose vector dimension")
    T_o: int = Field(32, ge=1, description="frames per action sequence")
    fps: float = Field(10.0, gt=0)
    batch_size: int = Field(8, ge=1)
    ae_epochs: int = Field(300, ge=0)
    ae_lr: float = Field(5e-3, gt=0)
    gan_epochs: int = Field(50, ge=0)
    alpha_d: float = Field(1e-3, gt=0)
    alpha_g: float = Field(2e-4, gt=0)
    a1: float = 1.0
    a2: float = 5.0
    seed: int = Field(0, ge=0)
    cell_activation: Literal["sigmoid", "tanh"] = "sigmoid"
    prob_clamp: float = Field(1e-7, gt=0, lt=0.5)
    init_scale: float = Field(0.08, gt=0)
    transfer_attention: bool = False
    a2t_input: Literal["data", "generated"] = Field(
        "data", description="sequence the action-to-text encoder reads during pretraining"
    )
    checkpoint_every: int = Field(0, ge=0, description="GAN steps between checkpoints; 0 disables")

    def training_config(self) -> TrainingConfig:
        """The TrainingConfig fields of this config (drops run-only fields)."""
        return TrainingConfig.model_validate(
            {name: getattr(self, name) for name in TrainingConfig.model_fields}
        )

    def config_hash(self) -> str:
        payload = json.dumps(self.training_config().model_dump(mode="json"), sort_keys=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def dims(self) -> dict[str, int]:
        return {"n": self.n, "n_z": self.n_z, "n_e": self.n_e, "n_x": self.n_x}


class RunConfig(TrainingConfig):
    """Everything one CLI invocation needs, as one flat key-value object."""

    profile: ProfileName = "desk"

    # paths
    out_dir: Path = Path("runs")
    dataset_path: Path | None = None
    embeddings_path: Path | None = None
    pretrain_checkpoint: Path | None = None
    gan_checkpoint: Path | None = None

    # synthetic data
    synth_classes: int = Field(2, ge=1)
    synth_per_class: int = Field(16, ge=1)
    synth_noise_scale: float = Field(0.02, ge=0)

    # embeddings
    min_count: int = Field(1, ge=1)
    embedding_window: int = Field(2, ge=1)
    embedding_negatives: int = Field(5, ge=1)
    embedding_epochs: int = Field(20, ge=1)
    embedding_lr: float = Field(0.025, gt=0)

    # pose pipeline
    smoothing_sigma: float = Field(1.0, ge=0)
    bone_lengths: list[float] = Field(
        default_factory=lambda: [0.25, 0.2, 0.3, 0.25, 0.2, 0.3, 0.25]
    )
    max_joint_speed: float = Field(1.5, gt=0, description="metres per second")

    # generation / evaluation
    num_samples: int = Field(3, ge=1)
    samples_per_class: int = Field(50, ge=1)
    diversity_samples: int = Field(10, ge=2)

    @model_validator(mode="after")
    def _check_bones(self) -> RunConfig:
        if len(self.bone_lengths) != 7 or any(b <= 0 for b in self.bone_lengths):
            raise ValueError("bone_lengths must be seven positive numbers")
        return self


DESK_PROFILE: dict[str, Any] = {
    "profile": "desk",
    "n": 16,
    "n_e": 8,
    "n_z": 4,
    "n_x": 24,
    "T_o": 32,
    "fps": 10.0,
    "batch_size": 8,
    "ae_epochs": 300,
    "ae_lr": 5e-3,
    "gan_epochs": 50,
    "alpha_d": 1e-3,
    "alpha_g": 2e-4,
    "a1": 1.0,
    "a2": 5.0,
    "transfer_attention": True,
}

PAPER_PROFILE: dict[str, Any] = {
    "profile": "paper",
    "n": 256,
    "n_e": 64,
    "n_z": 16,
    "n_x": 24,
    "T_o": 32,
    "fps": 10.0,
    "batch_size": 32,
    "ae_epochs": 250,
    "ae_lr": 5e-5,
    "gan_epochs": 400,
    "alpha_d": 2e-6,
    "alpha_g": 2e-6,
    "a1": 1.0,
    "a2": 5.0,
    "transfer_attention": False,
}

PROFILES: dict[str, dict[str, Any]] = {"desk": DESK_PROFILE, "paper": PAPER_PROFILE}


def load_config_file(path: Path) -> dict[str, Any]:
    """Read a flat JSON run config.

    Raises:
        ConfigError: If the file is missing, unreadable or not a JSON object.
    """
    try:
        with open(path, encoding="utf-8") as f:
            values = json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}") from e
    if not isinstance(values, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return values


def resolve_run_config(
    profile: str | None = None,
    config_file: Path | None = None,
    overrides: dict[str, Any] | None = None,
) -> RunConfig:
    """Merge profile defaults, a config file and explicit overrides (later wins).

    Overrides whose value is ``None`` are ignored, so unset CLI flags never
    mask file values.
    """
    settings = get_settings()
    if config_file is None:
        config_file = settings.config_file
    file_values = load_config_file(config_file) if config_file is not None else {}
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}

    profile_name = profile or file_values.get("profile") or settings.profile
    if profile_name not in PROFILES:
        raise ConfigError(f"unknown profile '{profile_name}' (expected one of {sorted(PROFILES)})")

    values = {**PROFILES[profile_name], **file_values, **overrides, "profile": profile_name}
    try:
        return RunConfig.model_validate(values)
    except ValidationError as e:
        raise ConfigError(f"invalid configuration: {e}") from e


def save_run_config(config: RunConfig, directory: Path, command: str | None = None) -> Path:
    """Write the resolved config to ``run_config_<command>.json`` (or ``run_config.json``)."""
    directory.mkdir(parents=True, exist_ok=True)
    name = f"run_config_{command}.json" if command else "run_config.json"
    path = directory / name
    with open(path, "w", encoding="utf-8") as f:
        f.write(config.model_dump_json(indent=2))
        f.write("\n")
    return path
