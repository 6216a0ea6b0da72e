"""Unit tests for smoothing, resampling and the speed limit."""

import numpy as np
import pytest

from text2action.data import (
    POSE_DIM,
    ActionSequence,
    JointTrajectory,
    gaussian_smooth,
    normalize_joints,
    resample,
    speed_limit,
    unit_block_error,
)
from text2action.errors import InputError


REST = np.tile([0.0, 0.0, -1.0], 7)


def _frames(neck_x):
    neck_x = np.asarray(neck_x, dtype=float)
    frames = np.tile(np.concatenate([[0.0, 0.0, 0.0], REST]), (len(neck_x), 1))
    frames[:, 0] = neck_x
    return frames


def test_smoothing_spreads_impulse_over_kernel_radius():
    """sigma = 1 with the default truncation touches four frames on each side."""
    impulse = np.zeros(21)
    impulse[10] = 1.0
    out = gaussian_smooth(ActionSequence(_frames(impulse)), 1.0).frames[:, 0]
    assert out[10] == pytest.approx(0.3989, abs=1e-3)
    assert np.all(out[6:15] > 0)
    assert out[5] == 0.0 and out[15] == 0.0
    assert out.sum() == pytest.approx(1.0)
    np.testing.assert_allclose(out[10 - 2], out[10 + 2])


def test_smoothing_sigma_zero_is_identity():
    seq = ActionSequence(_frames(np.linspace(0, 1, 5)))
    assert gaussian_smooth(seq, 0.0) is seq


def test_smoothing_keeps_unit_blocks():
    rng = np.random.default_rng(1)
    frames = _frames(np.zeros(12))
    frames[:, 3:] += 0.3 * rng.normal(size=(12, 21))
    out = gaussian_smooth(ActionSequence(normalize_joints(frames)), 2.0)
    assert unit_block_error(out.frames) < 1e-12


def test_resample_decimates_aligned_grid():
    times = np.arange(63) / 20.0
    frames = _frames(np.sin(times))
    out = resample(times, frames, fps=10.0, length=32)
    assert out.frames.shape == (32, POSE_DIM)
    np.testing.assert_allclose(out.frames[:, 0], np.sin(times[::2][:32]))


def test_resample_interpolates_linearly():
    times = np.arange(95) / 30.0
    out = resample(times, _frames(2.0 * times), fps=10.0, length=32)
    np.testing.assert_allclose(out.frames[:, 0], 2.0 * np.arange(32) / 10.0, atol=1e-12)


def test_resample_requires_span():
    times = np.arange(20) / 10.0
    with pytest.raises(InputError, match="need 3.100 s"):
        resample(times, _frames(times), fps=10.0, length=32)


def test_resample_rejects_unordered_times():
    with pytest.raises(InputError, match="increasing"):
        resample([0.0, 0.2, 0.1], _frames([0, 0, 0]), fps=10.0, length=2)


def test_action_sequence_validation():
    with pytest.raises(InputError):
        ActionSequence(np.ones((3, 5)))
    with pytest.raises(InputError):
        ActionSequence(_frames([0.0]), fps=0.0)
    assert ActionSequence(_frames([0.0] * 10), fps=10.0).duration == pytest.approx(1.0)


def _line(steps, fps, total_distance):
    """Every joint moves along x at a constant speed."""
    base = np.zeros((8, 3))
    offsets = np.linspace(0.0, total_distance, steps)
    positions = np.stack([base + [d, 0.0, 0.0] for d in offsets])
    return JointTrajectory(positions, fps)


def test_speed_limit_keeps_slow_trajectory():
    traj = _line(11, 10.0, 0.5)  # 0.5 m/s
    assert speed_limit(traj, 1.0) is traj


def test_speed_limit_dilates_fast_trajectory():
    traj = _line(11, 10.0, 3.0)  # 3 m/s
    limited = speed_limit(traj, 1.0)
    assert limited.peak_speed() <= 1.0 + 1e-9
    assert limited.duration == pytest.approx(3.0)
    np.testing.assert_allclose(limited.positions[-1], traj.positions[-1])
    np.testing.assert_allclose(limited.positions[0], traj.positions[0])


def test_speed_limit_keeps_final_pose_off_grid():
    traj = _line(11, 10.0, 2.55)  # dilation 2.55 does not land on the grid
    limited = speed_limit(traj, 1.0)
    assert limited.peak_speed() <= 1.0 + 1e-9
    np.testing.assert_allclose(limited.positions[-1], traj.positions[-1])


def test_speed_limit_rejects_non_positive():
    with pytest.raises(InputError):
        speed_limit(_line(3, 10.0, 1.0), 0.0)
