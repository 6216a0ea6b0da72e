"""Dataset records turned into embedded training pairs."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..data import DatasetRecord
from ..embedding import EmbeddedSentence, EmbeddingMatrix, embed
from ..errors import DatasetValidationError, InputError
from ..logging import log_event


@dataclass(frozen=True)
class TrainingPair:
    record_id: str
    label: str
    sentence: EmbeddedSentence
    action: np.ndarray  # (T_o, n_x)


def prepare_pairs(
    records: Sequence[DatasetRecord],
    embeddings: EmbeddingMatrix,
    T_o: int | None = None,
) -> list[TrainingPair]:
    """Embed every record's sentence; with ``T_o`` also check every action length."""
    if not records:
        raise InputError("no training records")
    vocabulary = embeddings.vocabulary
    pairs: list[TrainingPair] = []
    for record in records:
        if T_o is not None and record.action.length != T_o:
            raise DatasetValidationError(
                record.id, f"action has {record.action.length} frames, training expects {T_o}"
            )
        oov = vocabulary.oov(record.sentence)
        if oov:
            log_event("out_of_vocabulary", record=record.id, tokens=oov)
        sentence = embed(vocabulary.encode(record.sentence), embeddings)
        pairs.append(TrainingPair(record.id, record.label, sentence, record.frames))
    return pairs


def batches(items: Sequence, order: np.ndarray, size: int) -> list[list]:
    """Split ``items`` visited in ``order`` into consecutive batches of ``size``."""
    return [[items[i] for i in order[start : start + size]] for start in range(0, len(order), size)]
