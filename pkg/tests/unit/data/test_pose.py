"""Unit tests for pose vectors and the skeleton fit."""

import numpy as np
import pytest

from text2action.data import (
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
from text2action.errors import DegeneratePoseError, InputError

T_POSE = np.array(
    [
        [0.0, 0.0, 1.5],  # neck
        [0.0, 0.0, 1.75],  # head
        [0.2, 0.0, 1.5],  # left shoulder
        [0.5, 0.0, 1.5],  # left elbow
        [0.75, 0.0, 1.5],  # left wrist
        [-0.2, 0.0, 1.5],  # right shoulder
        [-0.2, 0.0, 1.2],  # right elbow
        [-0.2, 0.0, 0.95],  # right wrist
    ]
)


def test_build_pose_vector():
    x = build_pose_vector(RawKeypointFrame.from_positions(T_POSE))
    assert x.shape == (POSE_DIM,)
    np.testing.assert_allclose(x[:3], [0.0, 0.0, 1.5])
    np.testing.assert_allclose(x[3:6], [0.0, 0.0, 1.0])  # head up
    np.testing.assert_allclose(x[9:12], [1.0, 0.0, 0.0])  # left upper arm out
    np.testing.assert_allclose(x[18:21], [0.0, 0.0, -1.0])  # right upper arm down
    assert unit_block_error(x) < 1e-12


def test_coinciding_joints_raise():
    positions = T_POSE.copy()
    positions[3] = positions[2]
    with pytest.raises(DegeneratePoseError, match="left_shoulder"):
        build_pose_vector(RawKeypointFrame.from_positions(positions))


def test_frame_requires_every_joint():
    joints = dict(zip(JOINT_NAMES[:-1], T_POSE[:-1], strict=True))
    with pytest.raises(InputError, match="right_wrist"):
        RawKeypointFrame(0.0, joints)


def test_normalize_leaves_neck_alone():
    x = np.arange(1.0, 25.0)
    y = normalize_joints(x)
    np.testing.assert_array_equal(y[:3], x[:3])
    assert unit_block_error(y) < 1e-12
    np.testing.assert_allclose(y[3:6], x[3:6] / np.linalg.norm(x[3:6]))


def test_normalize_stack_and_zero_block():
    stack = np.ones((2, 5, POSE_DIM))
    assert normalize_joints(stack).shape == (2, 5, POSE_DIM)
    bad = np.ones(POSE_DIM)
    bad[12:15] = 0.0
    with pytest.raises(DegeneratePoseError):
        normalize_joints(bad)


def test_normalize_rejects_wrong_width():
    with pytest.raises(InputError):
        normalize_joints(np.ones(23))


def test_fit_to_skeleton_recovers_positions():
    """Bone lengths of the original frame reproduce it exactly."""
    x = build_pose_vector(RawKeypointFrame.from_positions(T_POSE))
    lengths = [0.25, 0.2, 0.3, 0.25, 0.2, 0.3, 0.25]
    np.testing.assert_allclose(fit_to_skeleton(x, lengths).positions(), T_POSE, atol=1e-12)


def test_fit_to_skeleton_then_build_is_identity():
    x = normalize_joints(np.random.default_rng(0).normal(size=POSE_DIM))
    frame = fit_to_skeleton(x, DEFAULT_BONE_LENGTHS)
    np.testing.assert_allclose(build_pose_vector(frame), x, atol=1e-12)


def test_fit_rejects_bad_bone_lengths():
    x = build_pose_vector(RawKeypointFrame.from_positions(T_POSE))
    with pytest.raises(InputError):
        fit_to_skeleton(x, [0.1] * 6)
    with pytest.raises(InputError):
        fit_to_skeleton(x, [0.1] * 6 + [0.0])


def test_mean_first_pose():
    a = np.tile(build_pose_vector(RawKeypointFrame.from_positions(T_POSE)), (3, 1))
    b = a.copy()
    b[:, 0] += 1.0
    x0 = mean_first_pose([a, b])
    assert x0[0] == pytest.approx(0.5)
    assert unit_block_error(x0) < 1e-12


def test_mean_first_pose_degenerate():
    a = normalize_joints(np.ones((1, POSE_DIM)))
    b = a.copy()
    b[:, 3:] *= -1.0
    with pytest.raises(DegeneratePoseError, match="mean first pose"):
        mean_first_pose([a, b])
