"""Unit tests for generator evaluation."""

from dataclasses import replace

import numpy as np
import pytest

from text2action.config import TrainingConfig
from text2action.data import SyntheticSpec, generate_synthetic_dataset, mean_first_pose
from text2action.embedding import EmbeddingMatrix, build_vocabulary
from text2action.errors import InputError
from text2action.evaluation import (
    EvaluationReport,
    assign_class,
    class_means,
    class_sentences,
    classification_accuracy,
    data_proximity,
    diversity,
    evaluate_generator,
)
from text2action.tensor import AdamState, SeededRng, Tensor
from text2action.training import AutoencoderCheckpoint, AutoencoderParams, transfer_and_freeze

T_O = 5


@pytest.fixture
def records():
    return generate_synthetic_dataset(SyntheticSpec(num_classes=2, per_class=3, length=T_O))


@pytest.fixture
def embeddings(records):
    vocabulary = build_vocabulary([record.sentence for record in records])
    return EmbeddingMatrix(vocabulary, np.random.default_rng(0).normal(size=(3, len(vocabulary))))


@pytest.fixture
def config():
    return TrainingConfig(n=4, n_e=3, n_z=2, T_o=T_O, init_scale=0.3)


@pytest.fixture
def autoencoder(config):
    return AutoencoderParams.init(config, SeededRng(0))


@pytest.fixture
def state(config, autoencoder, records):
    return transfer_and_freeze(autoencoder, config, mean_first_pose(r.frames for r in records))


def test_class_means(records):
    means = class_means(records)
    assert list(means) == ["raise_left", "raise_right"]
    left = [r.frames for r in records if r.label == "raise_left"]
    np.testing.assert_allclose(means["raise_left"], np.mean(left, axis=0))


def test_class_means_rejects_mixed_shapes(records):
    longer = generate_synthetic_dataset(SyntheticSpec(num_classes=1, per_class=1, length=T_O + 1))
    with pytest.raises(InputError, match="mixes"):
        class_means([*records, *longer])
    with pytest.raises(InputError):
        class_means([])


def test_assign_class_nearest_mean():
    means = {"a": np.zeros((2, 3)), "b": np.ones((2, 3))}
    assert assign_class(np.full((2, 3), 0.2), means) == "a"
    assert assign_class(np.full((2, 3), 0.9), means) == "b"
    assert assign_class(np.full((2, 3), 0.5), means) == "a"
    with pytest.raises(InputError):
        assign_class(np.zeros((3, 3)), means)


def test_classification_accuracy():
    means = {"a": np.zeros(2), "b": np.ones(2)}
    generated = [("a", np.zeros(2)), ("b", np.zeros(2)), ("b", np.ones(2)), ("a", np.ones(2))]
    assert classification_accuracy(generated, means) == 0.5
    with pytest.raises(InputError):
        classification_accuracy([], means)


def test_diversity():
    assert diversity([np.zeros(2), np.array([3.0, 4.0])]) == 5.0
    assert diversity([np.ones(3)] * 4) == 0.0
    with pytest.raises(InputError):
        diversity([np.zeros(2)])


def test_data_proximity_is_zero_on_training_samples(records):
    generated = [(r.label, r.frames) for r in records]
    assert data_proximity(generated, records) == 0.0
    with pytest.raises(InputError, match="no training samples"):
        data_proximity([("wave", records[0].frames)], records)


def test_class_sentences_takes_first_of_each_label(records):
    sentences = class_sentences(records)
    assert list(sentences) == ["raise_left", "raise_right"]
    assert sentences["raise_left"] == records[0].sentence


def test_evaluate_generator_report(state, records, embeddings):
    report = evaluate_generator(
        state, records, embeddings, samples_per_class=4, diversity_samples=3
    )
    assert isinstance(report, EvaluationReport)
    assert report.num_classes == 2
    assert report.chance_level == 0.5
    assert 0.0 <= report.accuracy <= 1.0
    assert set(report.per_class_accuracy) == {"raise_left", "raise_right"}
    assert report.diversity > 0.0
    assert report.data_proximity > 0.0
    assert report.baseline is None


def test_evaluate_generator_is_deterministic(state, records, embeddings):
    a = evaluate_generator(state, records, embeddings, samples_per_class=2, diversity_samples=2)
    b = evaluate_generator(state, records, embeddings, samples_per_class=2, diversity_samples=2)
    assert a == b


def test_noise_free_generator_has_no_diversity(state, records, embeddings):
    generator = dict(state.generator)
    for name in ("H_s", "H_xp"):
        generator[name] = Tensor(np.zeros(generator[name].shape))
    report = evaluate_generator(
        replace(state, generator=generator), records, embeddings, 2, diversity_samples=3
    )
    assert report.diversity == 0.0
    assert all(value == 0.0 for value in report.per_class_diversity.values())


def test_evaluate_with_baseline(state, config, autoencoder, records, embeddings):
    checkpoint = AutoencoderCheckpoint(autoencoder, state.x0, config, AdamState(), 0)
    report = evaluate_generator(
        state, records, embeddings, samples_per_class=2, diversity_samples=2, baseline=checkpoint
    )
    assert report.baseline is not None
    assert set(report.baseline.per_class_accuracy) == {"raise_left", "raise_right"}
    assert report.baseline.data_proximity >= 0.0
