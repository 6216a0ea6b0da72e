"""Skeleton joint trajectories and their CSV files."""

from __future__ import annotations

import csv
from collections.abc import Sequence
from pathlib import Path

import numpy as np

from ..errors import InputError, ParseError
from .pose import DEFAULT_BONE_LENGTHS, JOINT_NAMES, fit_to_skeleton, normalize_joints
from .sequence import JointTrajectory

CSV_HEADER = ("t", "joint", "x", "y", "z")


def poses_to_trajectory(
    frames: np.ndarray, fps: float, bone_lengths: Sequence[float] = DEFAULT_BONE_LENGTHS
) -> JointTrajectory:
    """Fit every pose of a (T, 24) sequence to the skeleton."""
    frames = normalize_joints(np.asarray(frames, dtype=np.float64))
    positions = [fit_to_skeleton(frame, bone_lengths).positions() for frame in frames]
    return JointTrajectory(np.stack(positions), fps)


def export_trajectory_csv(path: Path, trajectory: JointTrajectory) -> Path:
    """One ``t,joint,x,y,z`` row per joint per frame."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_HEADER)
        for j, frame in enumerate(trajectory.positions):
            t = repr(j / trajectory.fps)
            for name, (x, y, z) in zip(JOINT_NAMES, frame, strict=True):
                writer.writerow((t, name, repr(float(x)), repr(float(y)), repr(float(z))))
    return path


def load_trajectory_csv(path: Path, fps: float | None = None) -> JointTrajectory:
    """Read a trajectory CSV; ``fps`` is inferred from the timestamps unless given."""
    path = Path(path)
    times: list[float] = []
    frames: list[np.ndarray] = []
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or tuple(header) != CSV_HEADER:
            raise ParseError(str(path), 1, f"header must be {','.join(CSV_HEADER)}")
        rows = list(reader)
    if len(rows) % len(JOINT_NAMES) != 0 or not rows:
        raise ParseError(str(path), len(rows) + 1, "expected 8 rows per frame")
    for start in range(0, len(rows), len(JOINT_NAMES)):
        block = rows[start : start + len(JOINT_NAMES)]
        positions = np.empty((len(JOINT_NAMES), 3))
        for offset, (row, name) in enumerate(zip(block, JOINT_NAMES, strict=True)):
            line_number = start + offset + 2
            if len(row) != 5 or row[1] != name:
                raise ParseError(str(path), line_number, f"expected joint '{name}'")
            try:
                positions[offset] = [float(v) for v in row[2:]]
                t = float(row[0])
            except ValueError as e:
                raise ParseError(str(path), line_number, str(e)) from None
        times.append(t)
        frames.append(positions)
    if fps is None:
        if len(times) < 2:
            raise InputError("cannot infer fps from a single-frame trajectory")
        fps = 1.0 / (times[1] - times[0])
    return JointTrajectory(np.stack(frames), fps)
