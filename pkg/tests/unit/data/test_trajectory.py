"""Unit tests for skeleton trajectories and their CSV files."""

import numpy as np
import pytest

from text2action.data import (
    CLASS_LIBRARY,
    DEFAULT_BONE_LENGTHS,
    class_template,
    export_trajectory_csv,
    load_trajectory_csv,
    poses_to_trajectory,
    speed_limit,
)
from text2action.errors import ParseError


def test_trajectory_keeps_bone_lengths():
    frames = class_template(CLASS_LIBRARY[3], 32)
    traj = poses_to_trajectory(frames, 10.0)
    assert traj.positions.shape == (32, 8, 3)
    forearm = np.linalg.norm(traj.positions[:, 7] - traj.positions[:, 6], axis=-1)
    np.testing.assert_allclose(forearm, DEFAULT_BONE_LENGTHS[6])


def test_csv_round_trip(tmp_path):
    traj = poses_to_trajectory(class_template(CLASS_LIBRARY[0], 8), 10.0)
    path = export_trajectory_csv(tmp_path / "t.csv", traj)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,joint,x,y,z"
    assert len(lines) == 1 + 8 * 8
    loaded = load_trajectory_csv(path)
    assert loaded.fps == pytest.approx(10.0)
    np.testing.assert_array_equal(loaded.positions, traj.positions)


def test_speed_limited_export_stays_under_limit(tmp_path):
    traj = poses_to_trajectory(class_template(CLASS_LIBRARY[3], 32), 10.0)
    limited = speed_limit(traj, 0.5)
    loaded = load_trajectory_csv(export_trajectory_csv(tmp_path / "t.csv", limited))
    assert loaded.peak_speed() <= 0.5 + 1e-6
    assert loaded.duration >= traj.duration


def test_csv_bad_header(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("time,name\n")
    with pytest.raises(ParseError, match="header"):
        load_trajectory_csv(path)


def test_csv_wrong_joint_order(tmp_path):
    traj = poses_to_trajectory(class_template(CLASS_LIBRARY[0], 2), 10.0)
    path = export_trajectory_csv(tmp_path / "t.csv", traj)
    lines = path.read_text().splitlines()
    lines[1], lines[2] = lines[2], lines[1]
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(ParseError) as excinfo:
        load_trajectory_csv(path)
    assert excinfo.value.line_number == 2
