"""CLI interface for Text2Action."""

import functools
import sys
from pathlib import Path

import click
from rich.console import Console
from rich.table import Table

from ..config import RunConfig, resolve_run_config, save_run_config
from ..data import (
    POSE_DIM,
    SyntheticSpec,
    generate_synthetic_dataset,
    ingest_clips,
    load_dataset,
    make_record,
    normalize_joints,
    poses_to_trajectory,
    save_dataset,
    speed_limit,
)
from ..data import export_trajectory_csv as write_trajectory_csv
from ..embedding import (
    EmbeddingMatrix,
    build_vocabulary,
    embed_sentence,
    load_embeddings,
    save_embeddings,
    tokenize,
    train_embeddings,
)
from ..errors import ConfigError, NumericError, Text2ActionError
from ..evaluation import evaluate_generator
from ..logging import initialize_run_log, log_event, log_run_end
from ..model import sample_noise
from ..tensor import SeededRng
from ..training import (
    check_dimensions,
    generate_action,
    load_autoencoder_checkpoint,
    load_gan_checkpoint,
    prepare_pairs,
    pretrain_autoencoder,
    save_autoencoder_checkpoint,
    save_gan_checkpoint,
    train_gan,
    transfer_and_freeze,
    write_loss_csv,
    write_metrics_csv,
)

console = Console()
error_console = Console(stderr=True, style="bold red")

# Default artifact names inside --out; every command finds the previous one's output there.
DATASET_FILE = "dataset.jsonl"
EMBEDDINGS_FILE = "embeddings.txt"
PRETRAIN_FILE = "autoencoder.t2a"
GAN_FILE = "gan.t2a"


def common_options(func):
    """--config, --seed, --profile and --out, shared by every command."""
    options = [
        click.option(
            "--config",
            "config_file",
            type=click.Path(path_type=Path, dir_okay=False),
            default=None,
            help="JSON run config; command-line flags override its values",
        ),
        click.option("--seed", type=int, default=None, help="Global random seed"),
        click.option(
            "--profile",
            type=click.Choice(["desk", "paper"]),
            default=None,
            help="Named defaults (desk: small synthetic runs, paper: full-size model)",
        ),
        click.option(
            "--out",
            "out_dir",
            type=click.Path(path_type=Path, file_okay=False),
            default=None,
            help="Output directory",
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def run_command(name: str):
    """Open a run log around a command and map errors to exit codes."""

    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            initialize_run_log(name)
            try:
                return func(*args, **kwargs)
            except NumericError as e:
                error_console.print(f"Error: {e}")
                sys.exit(2)
            except (Text2ActionError, OSError) as e:
                error_console.print(f"Error: {e}")
                sys.exit(1)
            finally:
                log_run_end()

        return wrapper

    return decorator


def _resolve(command: str, profile, config_file, **overrides) -> RunConfig:
    config = resolve_run_config(profile, config_file, overrides)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    save_run_config(config, config.out_dir, command)
    return config


def _path(config: RunConfig, configured: Path | None, default_name: str) -> Path:
    return configured if configured is not None else config.out_dir / default_name


def _require(**paths: Path) -> None:
    missing = [f"{name}: {path}" for name, path in paths.items() if not path.exists()]
    if missing:
        raise ConfigError("missing inputs: " + ", ".join(missing))


def _check_embeddings(embeddings: EmbeddingMatrix, config: RunConfig) -> None:
    if embeddings.n_e != config.n_e:
        raise ConfigError(
            f"embeddings have n_e={embeddings.n_e}, configuration has n_e={config.n_e}"
        )


def _config_table(config: RunConfig) -> Table:
    table = Table(title=f"Configuration ({config.profile})")
    table.add_column("key", style="cyan")
    table.add_column("value")
    for key in (
        "n",
        "n_e",
        "n_z",
        "T_o",
        "batch_size",
        "ae_epochs",
        "ae_lr",
        "gan_epochs",
        "alpha_d",
        "alpha_g",
        "seed",
    ):
        table.add_row(key, str(getattr(config, key)))
    return table


@click.group()
@click.version_option(version="1.0.0")
def cli():
    """Text2Action - generate 3D upper-body motions from sentences.

    A typical desk-scale run shares one output directory:

        text2action synth --out run
        text2action train-embeddings --out run
        text2action pretrain --out run
        text2action train-gan --out run
        text2action generate "a person raises the left arm" --out run --skeleton
        text2action evaluate --out run
    """


@cli.command()
@common_options
@click.option("--classes", type=int, default=None, help="Number of motion classes")
@click.option("--per-class", type=int, default=None, help="Samples per class")
@click.option("--noise", type=float, default=None, help="Per-coordinate jitter scale")
@click.option("--dataset", type=click.Path(path_type=Path), default=None, help="Output file")
@run_command("synth")
def synth(config_file, seed, profile, out_dir, classes, per_class, noise, dataset):
    """Write a labelled synthetic dataset.

    Example:
        text2action synth --classes 3 --per-class 10 --seed 7 --out run
    """
    config = _resolve(
        "synth",
        profile,
        config_file,
        seed=seed,
        out_dir=out_dir,
        synth_classes=classes,
        synth_per_class=per_class,
        synth_noise_scale=noise,
        dataset_path=dataset,
    )
    spec = SyntheticSpec(
        num_classes=config.synth_classes,
        per_class=config.synth_per_class,
        noise_scale=config.synth_noise_scale,
        seed=config.seed,
        length=config.T_o,
        fps=config.fps,
    )
    records = generate_synthetic_dataset(spec)
    path = save_dataset(_path(config, config.dataset_path, DATASET_FILE), records)

    table = Table(title="Classes")
    table.add_column("label", style="cyan")
    table.add_column("records", justify="right")
    table.add_column("sentence")
    for synthetic_class in spec.classes():
        table.add_row(synthetic_class.name, str(spec.per_class), synthetic_class.sentence)
    console.print(table)
    console.print(f"[bold green]Wrote {len(records)} records to {path}[/bold green]")


@cli.command()
@click.argument("clips", type=click.Path(path_type=Path, dir_okay=False))
@common_options
@click.option("--dataset", type=click.Path(path_type=Path), default=None, help="Output file")
@run_command("ingest")
def ingest(clips, config_file, seed, profile, out_dir, dataset):
    """Turn raw keypoint clips (JSON lines) into a dataset file.

    Example:
        text2action ingest clips.jsonl --out run
    """
    config = _resolve(
        "ingest", profile, config_file, seed=seed, out_dir=out_dir, dataset_path=dataset
    )
    _require(clips=clips)
    records = ingest_clips(clips, config.smoothing_sigma, config.fps, config.T_o)
    path = save_dataset(_path(config, config.dataset_path, DATASET_FILE), records)
    console.print(f"[bold green]Wrote {len(records)} records to {path}[/bold green]")


@cli.command(name="train-embeddings")
@common_options
@click.option("--dataset", type=click.Path(path_type=Path), default=None, help="Dataset file")
@click.option("--epochs", type=int, default=None, help="Skip-gram epochs")
@run_command("train-embeddings")
def train_embeddings_command(config_file, seed, profile, out_dir, dataset, epochs):
    """Train word embeddings on the dataset sentences.

    Example:
        text2action train-embeddings --out run
    """
    config = _resolve(
        "train-embeddings",
        profile,
        config_file,
        seed=seed,
        out_dir=out_dir,
        dataset_path=dataset,
        embedding_epochs=epochs,
    )
    dataset_path = _path(config, config.dataset_path, DATASET_FILE)
    _require(dataset=dataset_path)
    corpus = [record.sentence for record in load_dataset(dataset_path)]
    vocabulary = build_vocabulary(corpus, config.min_count)
    embeddings = train_embeddings(
        corpus,
        vocabulary,
        n_e=config.n_e,
        window=config.embedding_window,
        negatives=config.embedding_negatives,
        epochs=config.embedding_epochs,
        seed=config.seed,
        lr=config.embedding_lr,
    )
    path = save_embeddings(_path(config, config.embeddings_path, EMBEDDINGS_FILE), embeddings)
    console.print(
        f"[bold green]Wrote {len(vocabulary)} word vectors (n_e={config.n_e}) "
        f"to {path}[/bold green]"
    )


@cli.command()
@common_options
@click.option("--dataset", type=click.Path(path_type=Path), default=None, help="Dataset file")
@click.option("--embeddings", type=click.Path(path_type=Path), default=None, help="Word vectors")
@click.option("--epochs", type=int, default=None, help="Autoencoder epochs")
@run_command("pretrain")
def pretrain(config_file, seed, profile, out_dir, dataset, embeddings, epochs):
    """Pretrain the language/action autoencoder.

    Example:
        text2action pretrain --epochs 100 --out run
    """
    config = _resolve(
        "pretrain",
        profile,
        config_file,
        seed=seed,
        out_dir=out_dir,
        dataset_path=dataset,
        embeddings_path=embeddings,
        ae_epochs=epochs,
    )
    console.print(_config_table(config))
    dataset_path = _path(config, config.dataset_path, DATASET_FILE)
    embeddings_path = _path(config, config.embeddings_path, EMBEDDINGS_FILE)
    _require(dataset=dataset_path, embeddings=embeddings_path)
    if config.n_x != POSE_DIM:
        raise ConfigError(f"n_x must be {POSE_DIM} for pose data, got {config.n_x}")

    vectors = load_embeddings(embeddings_path)
    _check_embeddings(vectors, config)
    pairs = prepare_pairs(load_dataset(dataset_path), vectors, config.T_o)

    report_every = max(1, config.ae_epochs // 10)

    def on_epoch(epoch: int, loss: float) -> None:
        if epoch % report_every == 0 or epoch == config.ae_epochs:
            console.print(f"[dim]epoch {epoch}/{config.ae_epochs}  loss {loss:.6f}[/dim]")

    result = pretrain_autoencoder(pairs, config.training_config(), on_epoch=on_epoch)
    checkpoint = save_autoencoder_checkpoint(
        _path(config, config.pretrain_checkpoint, PRETRAIN_FILE),
        result.params,
        result.x0,
        config,
        result.adam,
    )
    write_loss_csv(config.out_dir / "pretrain_loss.csv", result.epoch_losses)
    if result.epoch_losses:
        console.print(f"[bold green]Final loss: {result.epoch_losses[-1]:.6f}[/bold green]")
    console.print(f"Checkpoint: {checkpoint}")


@cli.command(name="train-gan")
@common_options
@click.option("--dataset", type=click.Path(path_type=Path), default=None, help="Dataset file")
@click.option("--embeddings", type=click.Path(path_type=Path), default=None, help="Word vectors")
@click.option(
    "--checkpoint", type=click.Path(path_type=Path), default=None, help="Autoencoder checkpoint"
)
@click.option("--epochs", type=int, default=None, help="GAN epochs")
@run_command("train-gan")
def train_gan_command(config_file, seed, profile, out_dir, dataset, embeddings, checkpoint, epochs):
    """Transfer the pretrained weights and train the GAN.

    Example:
        text2action train-gan --epochs 20 --out run
    """
    config = _resolve(
        "train-gan",
        profile,
        config_file,
        seed=seed,
        out_dir=out_dir,
        dataset_path=dataset,
        embeddings_path=embeddings,
        pretrain_checkpoint=checkpoint,
        gan_epochs=epochs,
    )
    console.print(_config_table(config))
    dataset_path = _path(config, config.dataset_path, DATASET_FILE)
    embeddings_path = _path(config, config.embeddings_path, EMBEDDINGS_FILE)
    pretrain_path = _path(config, config.pretrain_checkpoint, PRETRAIN_FILE)
    _require(dataset=dataset_path, embeddings=embeddings_path, checkpoint=pretrain_path)

    ae = load_autoencoder_checkpoint(pretrain_path)
    check_dimensions(ae.config.dims(), config, pretrain_path, ae.config.cell_activation)
    vectors = load_embeddings(embeddings_path)
    _check_embeddings(vectors, config)
    pairs = prepare_pairs(load_dataset(dataset_path), vectors, config.T_o)

    training = config.training_config()
    state = transfer_and_freeze(ae.params, training, ae.x0)
    checkpoint_dir = config.out_dir / "checkpoints" if config.checkpoint_every else None
    try:
        state = train_gan(pairs, state, dump_dir=config.out_dir, checkpoint_dir=checkpoint_dir)
    except NumericError:
        console.print(f"[yellow]NaN dump written to {config.out_dir}[/yellow]")
        raise

    path = save_gan_checkpoint(_path(config, config.gan_checkpoint, GAN_FILE), state)
    write_metrics_csv(config.out_dir / "gan_metrics.csv", state.metrics)
    if state.metrics:
        last = state.metrics[-1]
        table = Table(title=f"GAN step {last.step}")
        table.add_column("metric", style="cyan")
        table.add_column("value", justify="right")
        for name in ("V_D", "V_G", "mean_y_real", "mean_y_fake"):
            table.add_row(name, f"{getattr(last, name):.6f}")
        console.print(table)
    console.print(f"Checkpoint: {path}")


@cli.command()
@click.argument("sentence")
@common_options
@click.option("--num-samples", "-k", type=int, default=None, help="Number of generations")
@click.option("--embeddings", type=click.Path(path_type=Path), default=None, help="Word vectors")
@click.option("--checkpoint", type=click.Path(path_type=Path), default=None, help="GAN checkpoint")
@click.option("--skeleton", is_flag=True, default=False, help="Also write joint trajectories")
@run_command("generate")
def generate(
    sentence, config_file, seed, profile, out_dir, num_samples, embeddings, checkpoint, skeleton
):
    """Generate actions for SENTENCE.

    Sample i draws its noise from child stream i of the seed.

    Example:
        text2action generate "a person waves the right hand" -k 3 --skeleton --out run
    """
    config = _resolve(
        "generate",
        profile,
        config_file,
        seed=seed,
        out_dir=out_dir,
        num_samples=num_samples,
        embeddings_path=embeddings,
        gan_checkpoint=checkpoint,
    )
    gan_path = _path(config, config.gan_checkpoint, GAN_FILE)
    embeddings_path = _path(config, config.embeddings_path, EMBEDDINGS_FILE)
    _require(checkpoint=gan_path, embeddings=embeddings_path)

    state = load_gan_checkpoint(gan_path)
    vectors = load_embeddings(embeddings_path)
    if vectors.n_e != state.config.n_e:
        raise ConfigError(
            f"embeddings have n_e={vectors.n_e}, checkpoint {gan_path} has n_e={state.config.n_e}"
        )
    embedded, oov = embed_sentence(sentence, vectors)
    if oov:
        console.print(f"[yellow]Unknown words mapped to <unk>: {', '.join(oov)}[/yellow]")

    root = SeededRng(config.seed)
    for i in range(config.num_samples):
        noise = sample_noise(root.spawn(i), state.config.T_o, state.config.n_z)
        frames = normalize_joints(generate_action(state, embedded, noise))
        record = make_record(f"generated-{i:02d}", tokenize(sentence), frames, state.config.fps)
        path = save_dataset(config.out_dir / f"generated_{i:02d}.jsonl", [record])
        console.print(f"Sample {i}: {path}")
        if skeleton:
            trajectory = speed_limit(
                poses_to_trajectory(frames, state.config.fps, config.bone_lengths),
                config.max_joint_speed,
            )
            csv_path = write_trajectory_csv(
                config.out_dir / f"trajectory_{i:02d}.csv", trajectory
            )
            console.print(f"  trajectory ({trajectory.duration:.2f}s): {csv_path}")
    log_event("generated", sentence=sentence, samples=config.num_samples)


@cli.command()
@common_options
@click.option("--dataset", type=click.Path(path_type=Path), default=None, help="Dataset file")
@click.option("--embeddings", type=click.Path(path_type=Path), default=None, help="Word vectors")
@click.option("--checkpoint", type=click.Path(path_type=Path), default=None, help="GAN checkpoint")
@click.option(
    "--baseline",
    type=click.Path(path_type=Path),
    default=None,
    help="Autoencoder checkpoint to score as a baseline",
)
@click.option("--samples-per-class", type=int, default=None, help="Generations per class")
@run_command("evaluate")
def evaluate(
    config_file,
    seed,
    profile,
    out_dir,
    dataset,
    embeddings,
    checkpoint,
    baseline,
    samples_per_class,
):
    """Score a trained generator against a labelled dataset.

    Writes evaluation.json. The autoencoder baseline is included when its
    checkpoint is given or found in the output directory.

    Example:
        text2action evaluate --out run
    """
    config = _resolve(
        "evaluate",
        profile,
        config_file,
        seed=seed,
        out_dir=out_dir,
        dataset_path=dataset,
        embeddings_path=embeddings,
        gan_checkpoint=checkpoint,
        pretrain_checkpoint=baseline,
        samples_per_class=samples_per_class,
    )
    gan_path = _path(config, config.gan_checkpoint, GAN_FILE)
    dataset_path = _path(config, config.dataset_path, DATASET_FILE)
    embeddings_path = _path(config, config.embeddings_path, EMBEDDINGS_FILE)
    _require(checkpoint=gan_path, dataset=dataset_path, embeddings=embeddings_path)

    baseline_path = _path(config, config.pretrain_checkpoint, PRETRAIN_FILE)
    if config.pretrain_checkpoint is not None:
        _require(baseline=baseline_path)
    ae = load_autoencoder_checkpoint(baseline_path) if baseline_path.exists() else None

    report = evaluate_generator(
        load_gan_checkpoint(gan_path),
        load_dataset(dataset_path),
        load_embeddings(embeddings_path),
        samples_per_class=config.samples_per_class,
        diversity_samples=config.diversity_samples,
        seed=config.seed,
        baseline=ae,
    )
    path = config.out_dir / "evaluation.json"
    path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")

    table = Table(title="Evaluation")
    table.add_column("metric", style="cyan")
    table.add_column("generator", justify="right")
    table.add_column("baseline", justify="right")
    table.add_row(
        "accuracy",
        f"{report.accuracy:.3f}",
        f"{report.baseline.accuracy:.3f}" if report.baseline else "-",
    )
    table.add_row("chance", f"{report.chance_level:.3f}", "")
    table.add_row("diversity", f"{report.diversity:.4f}", "")
    table.add_row(
        "data proximity",
        f"{report.data_proximity:.4f}",
        f"{report.baseline.data_proximity:.4f}" if report.baseline else "-",
    )
    console.print(table)
    console.print(f"Report: {path}")


@cli.command(name="export-trajectory")
@click.argument("actions", type=click.Path(path_type=Path, dir_okay=False))
@common_options
@click.option("--no-speed-limit", is_flag=True, default=False, help="Keep the original timing")
@run_command("export-trajectory")
def export_trajectory(actions, config_file, seed, profile, out_dir, no_speed_limit):
    """Fit every action of a dataset or generation file to the skeleton.

    Example:
        text2action export-trajectory run/generated_00.jsonl --out run
    """
    config = _resolve("export-trajectory", profile, config_file, seed=seed, out_dir=out_dir)
    _require(actions=actions)
    for record in load_dataset(actions):
        trajectory = poses_to_trajectory(record.frames, record.fps, config.bone_lengths)
        if not no_speed_limit:
            trajectory = speed_limit(trajectory, config.max_joint_speed)
        path = write_trajectory_csv(config.out_dir / f"trajectory_{record.id}.csv", trajectory)
        console.print(
            f"{record.id}: {path} ({trajectory.duration:.2f}s, "
            f"peak {trajectory.peak_speed():.3f} m/s)"
        )


def main():
    """Entry point for the CLI."""
    cli()


if __name__ == "__main__":
    main()
