"""Word-embedding matrix, sentence embedding and the embedding text format."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import InputError, ParseError, ShapeError
from ..logging import log_event
from .vocabulary import UNKNOWN, Vocabulary, tokenize


@dataclass(frozen=True)
class EmbeddingMatrix:
    """V: one n_e-dimensional column per vocabulary entry."""

    vocabulary: Vocabulary
    matrix: np.ndarray

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[1] != len(self.vocabulary):
            raise ShapeError(
                f"embedding matrix has shape {matrix.shape}, "
                f"expected (n_e, {len(self.vocabulary)})"
            )
        if not np.all(np.isfinite(matrix)):
            raise InputError("embedding matrix holds non-finite values")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def n_e(self) -> int:
        return self.matrix.shape[0]

    @property
    def d(self) -> int:
        return self.matrix.shape[1]

    def vector(self, word: str) -> np.ndarray:
        return self.matrix[:, self.vocabulary.index(word)]


@dataclass(frozen=True)
class EmbeddedSentence:
    vectors: np.ndarray  # (T_i, n_e)
    tokens: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.tokens)


def embed(tokens: Sequence[int], embeddings: EmbeddingMatrix | np.ndarray) -> EmbeddedSentence:
    """e_t = V w_t for one-hot w_t, i.e. column ``tokens[t]`` of V."""
    if isinstance(embeddings, EmbeddingMatrix):
        matrix = embeddings.matrix
    else:
        matrix = np.asarray(embeddings)
    if not tokens:
        raise InputError("cannot embed an empty sentence")
    d = matrix.shape[1]
    bad = [t for t in tokens if not 0 <= int(t) < d]
    if bad:
        raise InputError(f"token indices {bad} outside vocabulary of size {d}")
    vectors = np.array(matrix[:, list(tokens)].T, dtype=np.float64)
    vectors.setflags(write=False)
    return EmbeddedSentence(vectors, tuple(int(t) for t in tokens))


def embed_sentence(text: str, embeddings: EmbeddingMatrix) -> tuple[EmbeddedSentence, list[str]]:
    """Tokenize and embed ``text``; returns the embedding and its out-of-vocabulary tokens."""
    tokens = tokenize(text)
    if not tokens:
        raise InputError(f"sentence {text!r} has no tokens")
    oov = embeddings.vocabulary.oov(tokens)
    if oov:
        log_event("out_of_vocabulary", sentence=text, tokens=oov)
    return embed(embeddings.vocabulary.encode(tokens), embeddings), oov


def save_embeddings(path: Path, embeddings: EmbeddingMatrix) -> Path:
    """Write ``d n_e`` then one ``word v_1 .. v_ne`` line per vocabulary entry."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"{embeddings.d} {embeddings.n_e}\n")
        for i, word in enumerate(embeddings.vocabulary.words):
            values = " ".join(repr(float(v)) for v in embeddings.matrix[:, i])
            f.write(f"{word} {values}\n")
    return path


def load_embeddings(path: Path) -> EmbeddingMatrix:
    """Read the embedding text format.

    Files written elsewhere may lack ``<unk>``; it is then added with a zero vector.
    """
    path = Path(path)
    with open(path, encoding="utf-8") as f:
        lines = f.read().splitlines()
    if not lines:
        raise ParseError(str(path), 1, "empty embedding file")
    try:
        d, n_e = (int(part) for part in lines[0].split())
    except ValueError:
        raise ParseError(str(path), 1, "first line must be 'd n_e'") from None

    words: list[str] = []
    columns: list[np.ndarray] = []
    for line_number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != n_e + 1:
            raise ParseError(str(path), line_number, f"expected a word and {n_e} floats")
        try:
            column = np.array([float(v) for v in parts[1:]])
        except ValueError as e:
            raise ParseError(str(path), line_number, str(e)) from None
        words.append(parts[0])
        columns.append(column)
    if len(words) != d:
        raise ParseError(str(path), 1, f"header announces {d} words, file holds {len(words)}")

    if UNKNOWN not in words:
        words.insert(0, UNKNOWN)
        columns.insert(0, np.zeros(n_e))
    vocabulary = Vocabulary.from_words(words)
    by_word = dict(zip(words, columns, strict=True))
    matrix = np.stack([by_word[w] for w in vocabulary.words], axis=1)
    return EmbeddingMatrix(vocabulary, matrix)
