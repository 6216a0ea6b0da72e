"""Action sequences over time: smoothing, resampling and speed limiting."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import gaussian_filter1d

from ..errors import InputError
from .pose import JOINT_NAMES, POSE_DIM, normalize_joints

DEFAULT_FPS = 10.0
DEFAULT_LENGTH = 32


@dataclass(frozen=True)
class ActionSequence:
    """Pose vectors sampled at a fixed frame rate; ``frames`` has shape (T, 24)."""

    frames: np.ndarray
    fps: float = DEFAULT_FPS

    def __post_init__(self) -> None:
        frames = np.array(self.frames, dtype=np.float64)
        if frames.ndim != 2 or frames.shape[1] != POSE_DIM or frames.shape[0] < 1:
            raise InputError(
                f"action frames must have shape (T >= 1, {POSE_DIM}), got {frames.shape}"
            )
        if not np.all(np.isfinite(frames)):
            raise InputError("action frames hold non-finite values")
        if not self.fps > 0:
            raise InputError(f"fps must be positive, got {self.fps}")
        frames.setflags(write=False)
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "fps", float(self.fps))

    @property
    def length(self) -> int:
        return self.frames.shape[0]

    @property
    def duration(self) -> float:
        return self.length / self.fps


def gaussian_smooth(seq: ActionSequence, sigma_frames: float) -> ActionSequence:
    """Gaussian filter along time on every coordinate, then renormalise the joint blocks.

    Boundaries are reflected. ``sigma_frames == 0`` returns the input unchanged.
    """
    if sigma_frames < 0:
        raise InputError(f"smoothing sigma must be non-negative, got {sigma_frames}")
    if sigma_frames == 0:
        return seq
    smoothed = gaussian_filter1d(seq.frames, sigma_frames, axis=0, mode="reflect")
    return ActionSequence(normalize_joints(smoothed), seq.fps)


def resample(
    times: Sequence[float],
    frames: np.ndarray,
    fps: float = DEFAULT_FPS,
    length: int = DEFAULT_LENGTH,
) -> ActionSequence:
    """Linear interpolation onto ``length`` frames at ``fps`` starting at the first timestamp.

    The input must cover the target grid: its span has to reach
    ``(length - 1) / fps`` seconds.
    """
    times = np.asarray(times, dtype=np.float64)
    frames = np.asarray(frames, dtype=np.float64)
    if frames.ndim != 2 or frames.shape[1] != POSE_DIM:
        raise InputError(f"frames must have shape (N, {POSE_DIM}), got {frames.shape}")
    if times.shape != (frames.shape[0],):
        raise InputError(f"{times.size} timestamps for {frames.shape[0]} frames")
    if times.size < 2:
        raise InputError("resampling needs at least two frames")
    if np.any(np.diff(times) <= 0):
        raise InputError("timestamps must be strictly increasing")
    if length < 1 or not fps > 0:
        raise InputError("length and fps must be positive")

    required = (length - 1) / fps
    span = float(times[-1] - times[0])
    if span + 1e-9 < required:
        raise InputError(
            f"clip spans {span:.3f} s but {length} frames at {fps:g} fps need {required:.3f} s"
        )
    targets = times[0] + np.arange(length) / fps
    targets = np.minimum(targets, times[-1])
    columns = [np.interp(targets, times, frames[:, j]) for j in range(POSE_DIM)]
    return ActionSequence(normalize_joints(np.stack(columns, axis=1)), fps)


@dataclass(frozen=True)
class JointTrajectory:
    """Joint positions over time; ``positions`` has shape (T, 8, 3) ordered as JOINT_NAMES."""

    positions: np.ndarray
    fps: float

    def __post_init__(self) -> None:
        positions = np.array(self.positions, dtype=np.float64)
        if positions.ndim != 3 or positions.shape[1:] != (len(JOINT_NAMES), 3):
            raise InputError(f"trajectory must have shape (T, 8, 3), got {positions.shape}")
        if positions.shape[0] < 1:
            raise InputError("trajectory needs at least one frame")
        if not self.fps > 0:
            raise InputError(f"fps must be positive, got {self.fps}")
        positions.setflags(write=False)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "fps", float(self.fps))

    @property
    def length(self) -> int:
        return self.positions.shape[0]

    @property
    def duration(self) -> float:
        """Seconds between the first and the last frame."""
        return (self.length - 1) / self.fps

    def frame_displacements(self) -> np.ndarray:
        """(T - 1, 8) distances every joint moves between consecutive frames."""
        return np.linalg.norm(np.diff(self.positions, axis=0), axis=-1)

    def peak_speed(self) -> float:
        if self.length < 2:
            return 0.0
        return float(self.frame_displacements().max() * self.fps)


def speed_limit(trajectory: JointTrajectory, max_joint_speed: float) -> JointTrajectory:
    """Slow a trajectory down uniformly until no joint exceeds ``max_joint_speed``.

    Time is dilated by k = max(1, peak / max_joint_speed) and the dilated motion
    is resampled at the original frame rate, always keeping the final pose.
    """
    if not max_joint_speed > 0:
        raise InputError(f"max joint speed must be positive, got {max_joint_speed}")
    k = max(1.0, trajectory.peak_speed() / max_joint_speed)
    if k == 1.0:
        return trajectory

    fps = trajectory.fps
    end = (trajectory.length - 1) / fps
    steps = math.floor((trajectory.length - 1) * k + 1e-9)
    # sample instants expressed in original time
    source_times = np.arange(steps + 1) / (fps * k)
    if end - source_times[-1] > 1e-12:
        source_times = np.append(source_times, end)
    source_times = np.minimum(source_times, end)

    original_times = np.arange(trajectory.length) / fps
    flat = trajectory.positions.reshape(trajectory.length, -1)
    columns = [np.interp(source_times, original_times, flat[:, j]) for j in range(flat.shape[1])]
    positions = np.stack(columns, axis=1).reshape(len(source_times), len(JOINT_NAMES), 3)
    return JointTrajectory(positions, fps)
