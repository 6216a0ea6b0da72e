"""Skip-gram with negative sampling for the word-embedding matrix."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from scipy.special import expit

from ..errors import InputError, NumericError
from ..logging import log_event
from ..tensor import SeededRng
from .embeddings import EmbeddingMatrix
from .vocabulary import UNKNOWN_INDEX, Vocabulary

NEGATIVE_POWER = 0.75


def _noise_table(vocabulary: Vocabulary) -> np.ndarray:
    """Cumulative unigram^0.75 distribution for drawing negative words."""
    weights = np.asarray(vocabulary.counts, dtype=np.float64) ** NEGATIVE_POWER
    weights[UNKNOWN_INDEX] = 0.0
    return np.cumsum(weights)


def _draw_negatives(
    rng: SeededRng, table: np.ndarray, count: int, exclude: int
) -> list[int]:
    drawn: list[int] = []
    while len(drawn) < count:
        for w in np.searchsorted(table, rng.random(count) * table[-1], side="right"):
            w = int(min(w, len(table) - 1))
            if w != exclude and len(drawn) < count:
                drawn.append(w)
    return drawn


def train_embeddings(
    corpus: Sequence[Sequence[str]],
    vocabulary: Vocabulary,
    n_e: int = 64,
    window: int = 2,
    negatives: int = 5,
    epochs: int = 5,
    seed: int = 0,
    lr: float = 0.025,
    min_lr: float = 1e-4,
) -> EmbeddingMatrix:
    """Train V by skip-gram with negative sampling.

    Each (center, context) pair inside a randomly shrunk window updates the
    context word's input vector towards predicting the center word, against
    ``negatives`` words drawn from the unigram^0.75 distribution. The learning
    rate decays linearly from ``lr`` to ``min_lr``. Unknown tokens are skipped.
    """
    if n_e < 2:
        raise InputError(f"n_e must be at least 2, got {n_e}")
    if window < 1 or negatives < 1 or epochs < 1:
        raise InputError("window, negatives and epochs must all be positive")
    sentences = [
        [i for i in vocabulary.encode(sentence) if i != UNKNOWN_INDEX] for sentence in corpus
    ]
    total_words = sum(len(s) for s in sentences)
    if total_words <= window:
        raise InputError(
            f"corpus holds {total_words} known tokens, fewer than window + 1 = {window + 1}"
        )
    if sum(1 for c in vocabulary.counts[1:] if c > 0) < 2:
        raise InputError("negative sampling needs at least two distinct counted words")

    rng = SeededRng(seed)
    d = len(vocabulary)
    syn0 = rng.uniform(-0.5, 0.5, (d, n_e)) / n_e
    syn1neg = np.zeros((d, n_e))
    table = _noise_table(vocabulary)
    labels = np.zeros(negatives + 1)
    labels[0] = 1.0

    total_steps = epochs * total_words
    seen = 0
    for epoch in range(epochs):
        for sentence in sentences:
            for pos, center in enumerate(sentence):
                alpha = max(min_lr, lr - (lr - min_lr) * seen / total_steps)
                seen += 1
                reduced = rng.integers(0, window)
                start = max(0, pos - window + reduced)
                for pos2 in range(start, min(len(sentence), pos + window + 1 - reduced)):
                    if pos2 == pos:
                        continue
                    context = sentence[pos2]
                    targets = [center, *_draw_negatives(rng, table, negatives, center)]
                    l1 = syn0[context]
                    l2 = syn1neg[targets]
                    gb = (labels - expit(l2 @ l1)) * alpha
                    neu1e = gb @ l2
                    np.add.at(syn1neg, targets, np.outer(gb, l1))
                    syn0[context] += neu1e
        log_event("embedding_epoch", epoch=epoch + 1, alpha=alpha)

    if not np.all(np.isfinite(syn0)):
        raise NumericError("skip-gram training produced non-finite embeddings")
    return EmbeddingMatrix(vocabulary, syn0.T.copy())
