"""Quantitative checks of a trained generator against a labelled dataset."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from itertools import combinations

import numpy as np
from pydantic import BaseModel

from .data import DatasetRecord, normalize_joints
from .embedding import EmbeddingMatrix, embed
from .errors import InputError
from .logging import log_event
from .model import encode, generate, sample_noise
from .tensor import SeededRng, Tensor
from .tensor import zeros as tensor_zeros
from .training import AutoencoderCheckpoint, GanState, generate_action


class BaselineReport(BaseModel):
    """Scores of the deterministic text-to-action decoder of the pretrained autoencoder."""

    accuracy: float
    per_class_accuracy: dict[str, float]
    data_proximity: float


class EvaluationReport(BaseModel):
    num_classes: int
    samples_per_class: int
    chance_level: float
    accuracy: float
    per_class_accuracy: dict[str, float]
    diversity: float
    per_class_diversity: dict[str, float]
    data_proximity: float
    baseline: BaselineReport | None = None


def class_means(records: Sequence[DatasetRecord]) -> dict[str, np.ndarray]:
    """Mean (T, 24) trajectory of every class label."""
    if not records:
        raise InputError("class means need at least one record")
    grouped: dict[str, list[np.ndarray]] = {}
    for record in records:
        grouped.setdefault(record.label, []).append(record.frames)
    means = {}
    for label in sorted(grouped):
        shapes = {frames.shape for frames in grouped[label]}
        if len(shapes) != 1:
            raise InputError(f"class '{label}' mixes sequence shapes {sorted(shapes)}")
        means[label] = np.mean(grouped[label], axis=0)
    return means


def _distance(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape != b.shape:
        raise InputError(f"cannot compare sequences of shapes {a.shape} and {b.shape}")
    return float(np.linalg.norm(a - b))


def assign_class(frames: np.ndarray, means: Mapping[str, np.ndarray]) -> str:
    """Label whose mean trajectory is nearest in L2 (ties go to the first label)."""
    if not means:
        raise InputError("no class means to assign against")
    return min(means, key=lambda label: _distance(frames, means[label]))


def classification_accuracy(
    generated: Sequence[tuple[str, np.ndarray]], means: Mapping[str, np.ndarray]
) -> float:
    if not generated:
        raise InputError("no generations to score")
    hits = sum(assign_class(frames, means) == label for label, frames in generated)
    return hits / len(generated)


def diversity(samples: Sequence[np.ndarray]) -> float:
    """Mean pairwise L2 distance among samples."""
    if len(samples) < 2:
        raise InputError("diversity needs at least two samples")
    return float(np.mean([_distance(a, b) for a, b in combinations(samples, 2)]))


def data_proximity(
    generated: Sequence[tuple[str, np.ndarray]], records: Sequence[DatasetRecord]
) -> float:
    """Mean distance from each generation to the nearest training sample of its class."""
    if not generated:
        raise InputError("no generations to score")
    by_label: dict[str, list[np.ndarray]] = {}
    for record in records:
        by_label.setdefault(record.label, []).append(record.frames)
    distances = []
    for label, frames in generated:
        if label not in by_label:
            raise InputError(f"no training samples of class '{label}'")
        distances.append(min(_distance(frames, real) for real in by_label[label]))
    return float(np.mean(distances))


def class_sentences(records: Sequence[DatasetRecord]) -> dict[str, tuple[str, ...]]:
    """First sentence seen for every class label."""
    sentences: dict[str, tuple[str, ...]] = {}
    for record in records:
        sentences.setdefault(record.label, record.sentence)
    return dict(sorted(sentences.items()))


def _per_class_accuracy(
    generated: Sequence[tuple[str, np.ndarray]], means: Mapping[str, np.ndarray]
) -> dict[str, float]:
    return {
        label: classification_accuracy([g for g in generated if g[0] == label], means)
        for label in sorted({label for label, _ in generated})
    }


def _baseline(
    checkpoint: AutoencoderCheckpoint,
    records: Sequence[DatasetRecord],
    embeddings: EmbeddingMatrix,
    means: Mapping[str, np.ndarray],
) -> BaselineReport:
    config = checkpoint.config
    generated = []
    for label, sentence in class_sentences(records).items():
        e = embed(embeddings.vocabulary.encode(sentence), embeddings)
        h = encode(Tensor(e.vectors), checkpoint.params.text_encoder, config.cell_activation)
        x_hat = generate(
            h,
            tensor_zeros((config.T_o, config.n_z)),
            Tensor(checkpoint.x0),
            checkpoint.params.t2a,
            config.cell_activation,
        )
        generated.append((label, normalize_joints(x_hat.numpy())))
    return BaselineReport(
        accuracy=classification_accuracy(generated, means),
        per_class_accuracy=_per_class_accuracy(generated, means),
        data_proximity=data_proximity(generated, records),
    )


def evaluate_generator(
    state: GanState,
    records: Sequence[DatasetRecord],
    embeddings: EmbeddingMatrix,
    samples_per_class: int = 50,
    diversity_samples: int = 10,
    seed: int = 0,
    baseline: AutoencoderCheckpoint | None = None,
) -> EvaluationReport:
    """Generate for every class sentence and score accuracy, diversity and data proximity.

    Generations are unit-block normalised before scoring. Class k draws its
    noise from child stream k of ``seed``.
    """
    config = state.config
    means = class_means(records)
    root = SeededRng(seed)
    generated: list[tuple[str, np.ndarray]] = []
    per_class_diversity: dict[str, float] = {}
    for k, (label, sentence) in enumerate(class_sentences(records).items()):
        e = embed(embeddings.vocabulary.encode(sentence), embeddings)
        rng = root.spawn(k)
        count = max(samples_per_class, diversity_samples)
        samples = [
            normalize_joints(
                generate_action(state, e, sample_noise(rng, config.T_o, config.n_z))
            )
            for _ in range(count)
        ]
        generated.extend((label, frames) for frames in samples[:samples_per_class])
        per_class_diversity[label] = diversity(samples[:diversity_samples])

    report = EvaluationReport(
        num_classes=len(means),
        samples_per_class=samples_per_class,
        chance_level=1.0 / len(means),
        accuracy=classification_accuracy(generated, means),
        per_class_accuracy=_per_class_accuracy(generated, means),
        diversity=float(np.mean(list(per_class_diversity.values()))),
        per_class_diversity=per_class_diversity,
        data_proximity=data_proximity(generated, records),
        baseline=_baseline(baseline, records, embeddings, means) if baseline else None,
    )
    log_event("evaluation", accuracy=report.accuracy, diversity=report.diversity)
    return report
