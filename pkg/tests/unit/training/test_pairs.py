"""Unit tests for training-pair preparation and batching."""

import numpy as np
import pytest

from text2action.errors import DatasetValidationError, InputError
from text2action.training import prepare_pairs
from text2action.training.pairs import batches


def test_pairs_embed_sentences(pairs, records):
    assert len(pairs) == len(records)
    first = pairs[0]
    assert first.label == "raise_left"
    assert first.sentence.vectors.shape == (len(records[0].sentence), 3)
    assert first.action.shape == (5, 24)


def test_length_mismatch_names_record(records, embeddings):
    with pytest.raises(DatasetValidationError, match="raise_left-000"):
        prepare_pairs(records, embeddings, 6)


def test_no_records(embeddings):
    with pytest.raises(InputError):
        prepare_pairs([], embeddings)


def test_batches_follow_order():
    items = ["a", "b", "c", "d", "e"]
    assert batches(items, np.array([4, 0, 2, 1, 3]), 2) == [["e", "a"], ["c", "b"], ["d"]]
