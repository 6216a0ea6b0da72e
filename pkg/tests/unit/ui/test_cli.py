"""Unit tests for the CLI commands."""

import json
from unittest.mock import patch

import pytest
from click.testing import CliRunner

import text2action.ui.cli as cli_module
from text2action.data import load_dataset, load_trajectory_csv
from text2action.errors import NumericError
from text2action.ui.cli import cli

TINY = {
    "n": 4,
    "n_e": 3,
    "n_z": 2,
    "T_o": 6,
    "batch_size": 2,
    "synth_per_class": 2,
    "embedding_epochs": 1,
    "ae_epochs": 1,
    "gan_epochs": 1,
    "num_samples": 2,
    "samples_per_class": 2,
    "diversity_samples": 2,
}


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def tiny_config(tmp_path):
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps(TINY))
    return path


def test_synth_defaults(runner, tmp_path):
    """synth writes 32 records and the resolved config."""
    out = tmp_path / "run"
    result = runner.invoke(cli, ["synth", "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert len(load_dataset(out / "dataset.jsonl")) == 32
    saved = json.loads((out / "run_config_synth.json").read_text())
    assert saved["profile"] == "desk"
    assert saved["seed"] == 0
    assert "Wrote 32 records" in result.output


def test_synth_flags(runner, tmp_path):
    out = tmp_path / "run"
    result = runner.invoke(cli, ["synth", "--classes", "3", "--per-class", "10", "--out", str(out)])
    assert result.exit_code == 0, result.output
    records = load_dataset(out / "dataset.jsonl")
    assert len(records) == 30
    assert len({r.label for r in records}) == 3


def test_synth_same_seed_is_byte_identical(runner, tmp_path):
    for name in ("a", "b"):
        result = runner.invoke(cli, ["synth", "--seed", "7", "--out", str(tmp_path / name)])
        assert result.exit_code == 0
    first = (tmp_path / "a" / "dataset.jsonl").read_bytes()
    assert first == (tmp_path / "b" / "dataset.jsonl").read_bytes()


def test_flags_override_config_file(runner, tmp_path, tiny_config):
    out = tmp_path / "run"
    result = runner.invoke(
        cli, ["synth", "--config", str(tiny_config), "--per-class", "3", "--out", str(out)]
    )
    assert result.exit_code == 0, result.output
    records = load_dataset(out / "dataset.jsonl")
    assert len(records) == 6
    assert records[0].frames.shape == (6, 24)


def test_missing_inputs_exit_1(runner, tmp_path):
    result = runner.invoke(cli, ["pretrain", "--out", str(tmp_path / "empty")])
    assert result.exit_code == 1
    assert "missing inputs" in result.output


def test_paper_profile_echoes_its_dimensions(runner, tmp_path):
    result = runner.invoke(cli, ["train-gan", "--profile", "paper", "--out", str(tmp_path)])
    assert result.exit_code == 1
    assert "256" in result.output
    assert "Configuration (paper)" in result.output


def test_invalid_config_exit_1(runner, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n": 0}))
    result = runner.invoke(cli, ["synth", "--config", str(path), "--out", str(tmp_path)])
    assert result.exit_code == 1
    assert "invalid configuration" in result.output


def test_numeric_error_exit_2(runner, tmp_path):
    with patch(
        "text2action.ui.cli.generate_synthetic_dataset",
        side_effect=NumericError("loss became nan"),
    ):
        result = runner.invoke(cli, ["synth", "--out", str(tmp_path)])
    assert result.exit_code == 2
    assert "loss became nan" in result.output


def test_run_log_is_written(runner, tmp_path, temp_logs_dir):
    runner.invoke(cli, ["synth", "--out", str(tmp_path)])
    (run_dir,) = temp_logs_dir.glob("run_*")
    lines = (run_dir / "events.log").read_text().splitlines()
    assert '"command": "synth"' in lines[0]
    assert '"event": "run_end"' in lines[-1]


def test_ingest(runner, tmp_path):
    clips = tmp_path / "clips.jsonl"
    joints = {
        "neck": [0.0, 0.0, 0.0],
        "head": [0.0, 0.0, 0.25],
        "left_shoulder": [0.2, 0.0, 0.0],
        "left_elbow": [0.2, 0.0, -0.3],
        "left_wrist": [0.2, 0.0, -0.55],
        "right_shoulder": [-0.2, 0.0, 0.0],
        "right_elbow": [-0.2, 0.0, -0.3],
        "right_wrist": [-0.2, 0.0, -0.55],
    }
    frames = [{"t": i / 10.0, "joints": joints} for i in range(40)]
    clip = {"id": "rest-000", "sentence": "a person stands still", "frames": frames}
    clips.write_text(json.dumps(clip) + "\n")
    out = tmp_path / "run"
    result = runner.invoke(cli, ["ingest", str(clips), "--out", str(out)])
    assert result.exit_code == 0, result.output
    (record,) = load_dataset(out / "dataset.jsonl")
    assert record.id == "rest-000"
    assert record.frames.shape == (32, 24)


def test_tiny_pipeline(runner, tmp_path, tiny_config):
    """Every command runs end to end on a tiny model sharing one output directory."""
    out = str(tmp_path / "run")
    common = ["--config", str(tiny_config), "--out", out]
    for command in (["synth"], ["train-embeddings"], ["pretrain"], ["train-gan"]):
        result = runner.invoke(cli, command + common)
        assert result.exit_code == 0, f"{command}: {result.output}"

    run = tmp_path / "run"
    for name in ("dataset.jsonl", "embeddings.txt", "autoencoder.t2a", "gan.t2a"):
        assert (run / name).exists()
    assert (run / "pretrain_loss.csv").read_text().startswith("epoch,loss")
    assert len((run / "gan_metrics.csv").read_text().splitlines()) == 3

    sentence = load_dataset(run / "dataset.jsonl")[0].text
    result = runner.invoke(cli, ["generate", sentence, "--skeleton", *common])
    assert result.exit_code == 0, result.output
    generated = load_dataset(run / "generated_00.jsonl")
    assert generated[0].id == "generated-00"
    assert generated[0].frames.shape == (6, 24)
    assert (run / "generated_01.jsonl").exists()
    trajectory = load_trajectory_csv(run / "trajectory_00.csv")
    assert trajectory.peak_speed() <= 1.5 + 1e-9

    result = runner.invoke(cli, ["generate", "zebra " + sentence, "-k", "1", *common])
    assert result.exit_code == 0
    assert "zebra" in result.output

    result = runner.invoke(cli, ["evaluate", *common])
    assert result.exit_code == 0, result.output
    report = json.loads((run / "evaluation.json").read_text())
    assert report["num_classes"] == 2
    assert report["chance_level"] == 0.5
    assert report["baseline"] is not None

    result = runner.invoke(cli, ["export-trajectory", str(run / "dataset.jsonl"), *common])
    assert result.exit_code == 0, result.output
    assert (run / "trajectory_raise_left-000.csv").exists()


def test_each_command_keeps_its_own_run_config(runner, tmp_path, tiny_config):
    """A later command does not overwrite the settings pretrain ran with."""
    run = tmp_path / "run"
    common = ["--config", str(tiny_config), "--out", str(run)]
    for command in (["synth"], ["train-embeddings"], ["pretrain", "--epochs", "2"], ["train-gan"]):
        result = runner.invoke(cli, command + common)
        assert result.exit_code == 0, f"{command}: {result.output}"

    saved = run / "run_config_pretrain.json"
    assert json.loads(saved.read_text())["ae_epochs"] == 2
    assert json.loads((run / "run_config_train-gan.json").read_text())["ae_epochs"] == 1
    assert not (run / "run_config.json").exists()

    losses = (run / "pretrain_loss.csv").read_text()
    checkpoint = (run / "autoencoder.t2a").read_bytes()
    assert len(losses.splitlines()) == 3

    result = runner.invoke(cli, ["pretrain", "--config", str(saved)])
    assert result.exit_code == 0, result.output
    assert (run / "pretrain_loss.csv").read_text() == losses
    assert (run / "autoencoder.t2a").read_bytes() == checkpoint


def test_train_gan_rejects_other_cell_activation(runner, tmp_path, tiny_config):
    run = tmp_path / "run"
    common = ["--config", str(tiny_config), "--out", str(run)]
    for command in (["synth"], ["train-embeddings"], ["pretrain"]):
        assert runner.invoke(cli, command + common).exit_code == 0
    other = tmp_path / "tanh.json"
    other.write_text(json.dumps({**TINY, "cell_activation": "tanh"}))
    result = runner.invoke(cli, ["train-gan", "--config", str(other), "--out", str(run)])
    assert result.exit_code == 1
    assert "cell_activation=sigmoid" in result.output


def test_generate_rejects_mismatched_embeddings(runner, tmp_path, tiny_config):
    out = str(tmp_path / "run")
    common = ["--config", str(tiny_config), "--out", out]
    for command in (["synth"], ["train-embeddings"], ["pretrain"], ["train-gan"]):
        assert runner.invoke(cli, command + common).exit_code == 0
    other = tmp_path / "wide.json"
    other.write_text(json.dumps({**TINY, "n_e": 5}))
    wide = tmp_path / "wide"
    runner.invoke(cli, ["synth", "--config", str(other), "--out", str(wide)])
    runner.invoke(cli, ["train-embeddings", "--config", str(other), "--out", str(wide)])
    result = runner.invoke(
        cli, ["generate", "a person", *common, "--embeddings", str(wide / "embeddings.txt")]
    )
    assert result.exit_code == 1
    assert "n_e=5" in result.output


def test_cli_submodule_is_patchable():
    with patch("text2action.ui.cli.generate_synthetic_dataset") as fake:
        assert cli_module.generate_synthetic_dataset is fake
