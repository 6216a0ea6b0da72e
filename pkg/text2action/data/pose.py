"""Upper-body pose vectors.

A pose vector is 24 floats: the neck position followed by seven unit joint
vectors, one per bone of the chain below.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from ..errors import DegeneratePoseError, InputError

POSE_DIM = 24
NUM_BONES = 7
MIN_NORM = 1e-9

JOINT_NAMES: tuple[str, ...] = (
    "neck",
    "head",
    "left_shoulder",
    "left_elbow",
    "left_wrist",
    "right_shoulder",
    "right_elbow",
    "right_wrist",
)

# (parent, child) for v_1 .. v_7
BONES: tuple[tuple[str, str], ...] = (
    ("neck", "head"),
    ("neck", "left_shoulder"),
    ("left_shoulder", "left_elbow"),
    ("left_elbow", "left_wrist"),
    ("neck", "right_shoulder"),
    ("right_shoulder", "right_elbow"),
    ("right_elbow", "right_wrist"),
)

DEFAULT_BONE_LENGTHS: tuple[float, ...] = (0.25, 0.2, 0.3, 0.25, 0.2, 0.3, 0.25)


@dataclass(frozen=True)
class RawKeypointFrame:
    """3D positions of the eight upper-body joints at one instant."""

    timestamp: float
    joints: Mapping[str, np.ndarray]

    def __post_init__(self) -> None:
        missing = [name for name in JOINT_NAMES if name not in self.joints]
        if missing:
            raise InputError(f"frame at t={self.timestamp} is missing joints {missing}")
        joints = {}
        for name in JOINT_NAMES:
            position = np.asarray(self.joints[name], dtype=np.float64)
            if position.shape != (3,) or not np.all(np.isfinite(position)):
                raise InputError(f"joint '{name}' must be three finite coordinates")
            joints[name] = position
        object.__setattr__(self, "joints", joints)

    @classmethod
    def from_positions(cls, positions: np.ndarray, timestamp: float = 0.0) -> RawKeypointFrame:
        """From an (8, 3) array ordered as JOINT_NAMES."""
        positions = np.asarray(positions, dtype=np.float64)
        if positions.shape != (len(JOINT_NAMES), 3):
            raise InputError(f"expected (8, 3) joint positions, got {positions.shape}")
        return cls(timestamp, dict(zip(JOINT_NAMES, positions, strict=True)))

    def positions(self) -> np.ndarray:
        return np.stack([self.joints[name] for name in JOINT_NAMES])


def _blocks(x: np.ndarray) -> np.ndarray:
    return x[..., 3:].reshape(*x.shape[:-1], NUM_BONES, 3)


def _check_dim(x: np.ndarray) -> None:
    if x.shape[-1:] != (POSE_DIM,):
        raise InputError(f"pose vectors have {POSE_DIM} values, got shape {x.shape}")


def build_pose_vector(frame: RawKeypointFrame) -> np.ndarray:
    """Neck position plus the normalised child-minus-parent offset of every bone."""
    x = np.empty(POSE_DIM)
    x[:3] = frame.joints["neck"]
    for k, (parent, child) in enumerate(BONES):
        offset = frame.joints[child] - frame.joints[parent]
        norm = np.linalg.norm(offset)
        if norm < MIN_NORM:
            raise DegeneratePoseError(f"joints '{parent}' and '{child}' coincide")
        x[3 + 3 * k : 6 + 3 * k] = offset / norm
    return x


def normalize_joints(x: np.ndarray) -> np.ndarray:
    """Rescale each joint block to unit length; the neck position is untouched.

    Works on a single pose (24,) or any stack of poses (..., 24).
    """
    x = np.array(x, dtype=np.float64)
    _check_dim(x)
    blocks = _blocks(x)
    norms = np.linalg.norm(blocks, axis=-1, keepdims=True)
    if np.any(norms < MIN_NORM):
        bone = int(np.argwhere(norms[..., 0] < MIN_NORM)[0][-1])
        parent, child = BONES[bone]
        raise DegeneratePoseError(f"joint vector {parent}->{child} has (near) zero length")
    x[..., 3:] = (blocks / norms).reshape(*x.shape[:-1], NUM_BONES * 3)
    return x


def unit_block_error(x: np.ndarray) -> float:
    """Largest deviation of any joint block norm from 1."""
    x = np.asarray(x, dtype=np.float64)
    _check_dim(x)
    return float(np.max(np.abs(np.linalg.norm(_blocks(x), axis=-1) - 1.0)))


def _check_bone_lengths(bone_lengths: Sequence[float]) -> np.ndarray:
    lengths = np.asarray(bone_lengths, dtype=np.float64)
    if lengths.shape != (NUM_BONES,):
        raise InputError(f"need {NUM_BONES} bone lengths, got {lengths.shape}")
    if np.any(lengths <= 0) or not np.all(np.isfinite(lengths)):
        raise InputError(f"bone lengths must be positive, got {lengths.tolist()}")
    return lengths


def fit_to_skeleton(
    pose: np.ndarray,
    bone_lengths: Sequence[float] = DEFAULT_BONE_LENGTHS,
    timestamp: float = 0.0,
) -> RawKeypointFrame:
    """Place every joint at its parent plus bone length times its unit vector."""
    pose = np.asarray(pose, dtype=np.float64)
    _check_dim(pose)
    lengths = _check_bone_lengths(bone_lengths)
    joints = {"neck": pose[:3].copy()}
    for k, (parent, child) in enumerate(BONES):
        joints[child] = joints[parent] + lengths[k] * pose[3 + 3 * k : 6 + 3 * k]
    return RawKeypointFrame(timestamp, joints)


def mean_first_pose(sequences: Iterable[np.ndarray]) -> np.ndarray:
    """Mean of the first frames of every sequence, renormalised.

    Accepts (T, 24) arrays or anything with a ``frames`` attribute.
    """
    firsts = [np.asarray(getattr(s, "frames", s), dtype=np.float64)[0] for s in sequences]
    if not firsts:
        raise InputError("mean first pose needs at least one sequence")
    mean = np.sum(firsts, axis=0) / len(firsts)
    try:
        return normalize_joints(mean)
    except DegeneratePoseError as e:
        raise DegeneratePoseError(f"degenerate mean first pose: {e}") from e
