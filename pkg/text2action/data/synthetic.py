"""Parametric arm motions paired with sentences, for desk-scale training.

Coordinates: x points to the person's left, y forward, z up. At rest both
arms hang straight down from the shoulders.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..embedding import tokenize
from ..errors import InputError
from ..tensor import SeededRng
from .dataset import DatasetRecord, make_record
from .pose import normalize_joints
from .sequence import DEFAULT_FPS, DEFAULT_LENGTH

UP = np.array([0.0, 0.0, 1.0])
DOWN = np.array([0.0, 0.0, -1.0])
LEFT = np.array([1.0, 0.0, 0.0])
RIGHT = np.array([-1.0, 0.0, 0.0])
NECK = np.zeros(3)

# bone order: head, l_shoulder, l_upper, l_fore, r_shoulder, r_upper, r_fore
Motion = Callable[[np.ndarray], np.ndarray]


def _rise(phase: np.ndarray, amplitude: float) -> np.ndarray:
    """0 -> amplitude -> 0 over one period."""
    return amplitude * (1.0 - np.cos(2.0 * np.pi * phase)) / 2.0


def _frontal(theta: np.ndarray, side: np.ndarray) -> np.ndarray:
    """Arm direction swung up sideways by ``theta`` from hanging down."""
    return np.outer(np.sin(theta), side) + np.outer(np.cos(theta), DOWN)


def _sagittal(theta: np.ndarray) -> np.ndarray:
    forward = np.array([0.0, 1.0, 0.0])
    return np.outer(np.sin(theta), forward) + np.outer(np.cos(theta), DOWN)


def _assemble(
    phase: np.ndarray,
    left_upper: np.ndarray | None = None,
    left_fore: np.ndarray | None = None,
    right_upper: np.ndarray | None = None,
    right_fore: np.ndarray | None = None,
) -> np.ndarray:
    T = phase.shape[0]
    rest = np.tile(DOWN, (T, 1))

    def pick(block: np.ndarray | None) -> np.ndarray:
        return rest if block is None else block

    blocks = [
        np.tile(NECK, (T, 1)),
        np.tile(UP, (T, 1)),
        np.tile(LEFT, (T, 1)),
        pick(left_upper),
        pick(left_fore if left_fore is not None else left_upper),
        np.tile(RIGHT, (T, 1)),
        pick(right_upper),
        pick(right_fore if right_fore is not None else right_upper),
    ]
    return np.concatenate(blocks, axis=1)


def _raise_left(phase: np.ndarray) -> np.ndarray:
    return _assemble(phase, left_upper=_frontal(_rise(phase, 0.9 * np.pi), LEFT))


def _raise_right(phase: np.ndarray) -> np.ndarray:
    return _assemble(phase, right_upper=_frontal(_rise(phase, 0.9 * np.pi), RIGHT))


def _raise_both(phase: np.ndarray) -> np.ndarray:
    theta = _rise(phase, 0.9 * np.pi)
    return _assemble(phase, left_upper=_frontal(theta, LEFT), right_upper=_frontal(theta, RIGHT))


def _wave_right(phase: np.ndarray) -> np.ndarray:
    envelope = _rise(phase, 1.0)
    upper = 0.5 * np.pi * envelope
    fore = upper + envelope * (0.5 * np.pi + 0.4 * np.sin(6.0 * np.pi * phase))
    return _assemble(phase, right_upper=_frontal(upper, RIGHT), right_fore=_frontal(fore, RIGHT))


def _reach_forward(phase: np.ndarray) -> np.ndarray:
    return _assemble(phase, right_upper=_sagittal(_rise(phase, 0.5 * np.pi)))


@dataclass(frozen=True)
class SyntheticClass:
    name: str
    sentence: str
    motion: Motion


CLASS_LIBRARY: tuple[SyntheticClass, ...] = (
    SyntheticClass("raise_left", "a person raises the left arm", _raise_left),
    SyntheticClass("raise_right", "a person raises the right arm", _raise_right),
    SyntheticClass("raise_both", "a person raises both arms", _raise_both),
    SyntheticClass("wave_right", "a person waves the right hand", _wave_right),
    SyntheticClass("reach_forward", "a person reaches forward with the right arm", _reach_forward),
)


class SyntheticSpec(BaseModel):
    """Which classes to draw, how many samples each, and how noisy."""

    model_config = ConfigDict(extra="forbid")

    num_classes: int = Field(2, ge=1)
    per_class: int = Field(16, ge=1)
    noise_scale: float = Field(0.02, ge=0)
    seed: int = 0
    length: int = Field(DEFAULT_LENGTH, ge=2)
    fps: float = Field(DEFAULT_FPS, gt=0)

    def classes(self) -> tuple[SyntheticClass, ...]:
        if self.num_classes > len(CLASS_LIBRARY):
            raise InputError(
                f"{self.num_classes} classes requested, the library has {len(CLASS_LIBRARY)}"
            )
        return CLASS_LIBRARY[: self.num_classes]


def class_template(synthetic_class: SyntheticClass, length: int = DEFAULT_LENGTH) -> np.ndarray:
    """Noise-free (length, 24) motion of a class."""
    phase = np.arange(length) / (length - 1)
    return normalize_joints(synthetic_class.motion(phase))


def generate_synthetic_dataset(spec: SyntheticSpec) -> list[DatasetRecord]:
    """``per_class`` jittered copies of every class template, ids ``<class>-<index>``.

    Each class draws from its own child stream of the seed, so adding classes
    leaves the earlier ones unchanged.
    """
    root = SeededRng(spec.seed)
    records: list[DatasetRecord] = []
    for class_index, synthetic_class in enumerate(spec.classes()):
        rng = root.spawn(class_index)
        template = class_template(synthetic_class, spec.length)
        tokens = tokenize(synthetic_class.sentence)
        for i in range(spec.per_class):
            jitter = spec.noise_scale * rng.normal(template.shape)
            frames = normalize_joints(template + jitter)
            records.append(
                make_record(f"{synthetic_class.name}-{i:03d}", tokens, frames, spec.fps)
            )
    return records
