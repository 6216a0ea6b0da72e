"""Tiny models and datasets for training tests."""

import numpy as np
import pytest

from text2action.config import TrainingConfig
from text2action.data import SyntheticSpec, generate_synthetic_dataset
from text2action.embedding import EmbeddingMatrix, build_vocabulary
from text2action.training import prepare_pairs

T_O = 5


@pytest.fixture
def tiny_config():
    return TrainingConfig(
        n=4,
        n_e=3,
        n_z=2,
        T_o=T_O,
        batch_size=2,
        ae_epochs=2,
        gan_epochs=1,
        init_scale=0.3,
        transfer_attention=True,
    )


@pytest.fixture
def records():
    return generate_synthetic_dataset(SyntheticSpec(num_classes=2, per_class=2, length=T_O))


@pytest.fixture
def embeddings(records):
    vocabulary = build_vocabulary([record.sentence for record in records])
    matrix = np.random.default_rng(0).normal(size=(3, len(vocabulary)))
    return EmbeddingMatrix(vocabulary, matrix)


@pytest.fixture
def pairs(records, embeddings):
    return prepare_pairs(records, embeddings, T_O)
