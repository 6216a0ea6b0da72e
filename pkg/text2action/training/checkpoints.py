"""Autoencoder and GAN checkpoints, metric and loss CSVs."""

from __future__ import annotations

import csv
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import ValidationError

from ..config import TrainingConfig
from ..errors import CheckpointError, ConfigError
from ..model import (
    Checkpoint,
    discriminator_shapes,
    flatten_groups,
    generator_shapes,
    load_checkpoint,
    save_checkpoint,
    validate_params,
)
from ..tensor import AdamState, Tensor
from .autoencoder import GROUPS, AutoencoderParams, autoencoder_shapes
from .gan import GanState, StepMetrics

METRIC_HEADER = ("step", "V_D", "V_G", "mean_y_real", "mean_y_fake", "clamped")
LOSS_HEADER = ("epoch", "loss")


def _adam_metadata(state: AdamState) -> dict[str, Any]:
    return {
        "t": state.t,
        "lr": state.lr,
        "beta1": state.beta1,
        "beta2": state.beta2,
        "eps": state.eps,
    }


def _adam_groups(prefix: str, state: AdamState) -> dict[str, dict[str, np.ndarray]]:
    return {f"{prefix}_m": dict(state.m), f"{prefix}_v": dict(state.v)}


def _restore_adam(checkpoint: Checkpoint, prefix: str, meta: Mapping[str, Any]) -> AdamState:
    state = AdamState(
        lr=float(meta["lr"]),
        beta1=float(meta["beta1"]),
        beta2=float(meta["beta2"]),
        eps=float(meta["eps"]),
        t=int(meta["t"]),
    )
    if state.t > 0:
        state.m = {k: v.values.copy() for k, v in checkpoint.group(f"{prefix}_m").items()}
        state.v = {k: v.values.copy() for k, v in checkpoint.group(f"{prefix}_v").items()}
    return state


def _base_metadata(kind: str, config: TrainingConfig, step: int) -> dict[str, Any]:
    training = config.training_config()
    return {
        "kind": kind,
        "step": step,
        "dims": training.dims(),
        "config": training.model_dump(mode="json"),
        "config_hash": training.config_hash(),
    }


def _read(path: Path, kind: str) -> tuple[Checkpoint, TrainingConfig]:
    checkpoint = load_checkpoint(path)
    meta = checkpoint.metadata
    if meta.get("kind") != kind:
        found = meta.get("kind")
        raise CheckpointError(f"{path} holds a '{found}' checkpoint, expected '{kind}'")
    try:
        config = TrainingConfig.model_validate(meta["config"])
    except (KeyError, ValidationError) as e:
        raise CheckpointError(f"{path}: checkpoint config is missing or invalid: {e}") from e
    return checkpoint, config


def check_dimensions(
    checkpoint_dims: Mapping[str, int],
    config: TrainingConfig,
    path: Path,
    cell_activation: str | None = None,
) -> None:
    """Raise ConfigError naming the first dimension where a checkpoint and config disagree.

    A given ``cell_activation`` (the checkpoint's) must match the config's too.
    """
    for name, value in config.dims().items():
        stored = checkpoint_dims.get(name)
        if stored != value:
            raise ConfigError(
                f"checkpoint {path} was trained with {name}={stored}, "
                f"configuration has {name}={value}"
            )
    if cell_activation is not None and cell_activation != config.cell_activation:
        raise ConfigError(
            f"checkpoint {path} was trained with cell_activation={cell_activation}, "
            f"configuration has cell_activation={config.cell_activation}"
        )


@dataclass
class AutoencoderCheckpoint:
    params: AutoencoderParams
    x0: np.ndarray
    config: TrainingConfig
    adam: AdamState
    step: int


def save_autoencoder_checkpoint(
    path: Path,
    params: AutoencoderParams,
    x0: np.ndarray,
    config: TrainingConfig,
    adam: AdamState,
) -> Path:
    groups: dict[str, Mapping[str, Tensor | np.ndarray]] = dict(params.groups())
    groups.update(_adam_groups("adam", adam))
    groups["pose"] = {"x0": np.asarray(x0)}
    metadata = _base_metadata("autoencoder", config, adam.t)
    metadata["adam"] = _adam_metadata(adam)
    return save_checkpoint(path, flatten_groups(groups), metadata)


def load_autoencoder_checkpoint(path: Path) -> AutoencoderCheckpoint:
    checkpoint, config = _read(path, "autoencoder")
    params = AutoencoderParams(**{group: checkpoint.group(group) for group in GROUPS})
    try:
        params.validate(config)
    except ValueError as e:
        raise CheckpointError(f"{path}: {e}") from e
    adam = _restore_adam(checkpoint, "adam", checkpoint.metadata["adam"])
    return AutoencoderCheckpoint(
        params=params,
        x0=checkpoint.array("pose/x0"),
        config=config,
        adam=adam,
        step=int(checkpoint.metadata.get("step", 0)),
    )


def save_gan_checkpoint(path: Path, state: GanState) -> Path:
    groups: dict[str, Mapping[str, Tensor | np.ndarray]] = {
        "encoder": state.encoder,
        "generator": state.generator,
        "discriminator": state.discriminator,
        "pose": {"x0": state.x0},
    }
    groups.update(_adam_groups("adam_g", state.adam_g))
    groups.update(_adam_groups("adam_d", state.adam_d))
    metadata = _base_metadata("gan", state.config, state.step)
    metadata["adam_g"] = _adam_metadata(state.adam_g)
    metadata["adam_d"] = _adam_metadata(state.adam_d)
    return save_checkpoint(path, flatten_groups(groups), metadata)


def load_gan_checkpoint(path: Path) -> GanState:
    checkpoint, config = _read(path, "gan")
    meta = checkpoint.metadata
    encoder = checkpoint.group("encoder")
    generator = checkpoint.group("generator")
    discriminator = checkpoint.group("discriminator")
    n, n_x, n_z = config.n, config.n_x, config.n_z
    try:
        validate_params(encoder, autoencoder_shapes(config)["text_encoder"], "encoder")
        validate_params(generator, generator_shapes(n, n_x, n_z), "generator")
        validate_params(discriminator, discriminator_shapes(n, n_x, n_z), "discriminator")
    except ValueError as e:
        raise CheckpointError(f"{path}: {e}") from e
    return GanState(
        encoder=encoder,
        generator=generator,
        discriminator=discriminator,
        adam_g=_restore_adam(checkpoint, "adam_g", meta["adam_g"]),
        adam_d=_restore_adam(checkpoint, "adam_d", meta["adam_d"]),
        x0=checkpoint.array("pose/x0"),
        config=config,
        step=int(meta.get("step", 0)),
    )


def write_metrics_csv(path: Path, metrics: Sequence[StepMetrics]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(METRIC_HEADER)
        for m in metrics:
            writer.writerow(
                (
                    m.step,
                    repr(m.V_D),
                    repr(m.V_G),
                    repr(m.mean_y_real),
                    repr(m.mean_y_fake),
                    m.clamped,
                )
            )
    return path


def read_metrics_csv(path: Path) -> list[dict[str, float]]:
    with open(path, encoding="utf-8", newline="") as f:
        return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(f)]


def write_loss_csv(path: Path, epoch_losses: Sequence[float]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(LOSS_HEADER)
        for epoch, loss in enumerate(epoch_losses, start=1):
            writer.writerow((epoch, repr(float(loss))))
    return path
