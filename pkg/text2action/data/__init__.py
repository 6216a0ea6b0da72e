"""Pose vectors, action sequences, datasets and trajectories."""

from .dataset import (
    DatasetRecord,
    ingest_clips,
    load_dataset,
    make_record,
    record_from_json,
    save_dataset,
)
from .pose import (
    BONES,
    DEFAULT_BONE_LENGTHS,
    JOINT_NAMES,
    POSE_DIM,
    RawKeypointFrame,
    build_pose_vector,
    fit_to_skeleton,
    mean_first_pose,
    normalize_joints,
    unit_block_error,
)
from .sequence import (
    ActionSequence,
    JointTrajectory,
    gaussian_smooth,
    resample,
    speed_limit,
)
from .synthetic import CLASS_LIBRARY, SyntheticSpec, class_template, generate_synthetic_dataset
from .trajectory import export_trajectory_csv, load_trajectory_csv, poses_to_trajectory

__all__ = [
    "BONES",
    "CLASS_LIBRARY",
    "DEFAULT_BONE_LENGTHS",
    "JOINT_NAMES",
    "POSE_DIM",
    "ActionSequence",
    "DatasetRecord",
    "JointTrajectory",
    "RawKeypointFrame",
    "SyntheticSpec",
    "build_pose_vector",
    "class_template",
    "export_trajectory_csv",
    "fit_to_skeleton",
    "gaussian_smooth",
    "generate_synthetic_dataset",
    "ingest_clips",
    "load_dataset",
    "load_trajectory_csv",
    "make_record",
    "mean_first_pose",
    "normalize_joints",
    "poses_to_trajectory",
    "record_from_json",
    "resample",
    "save_dataset",
    "speed_limit",
    "unit_block_error",
]
