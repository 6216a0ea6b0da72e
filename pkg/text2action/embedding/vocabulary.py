"""Tokenizer and vocabulary."""

from __future__ import annotations

import string
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from ..errors import InputError

UNKNOWN = "<unk>"
UNKNOWN_INDEX = 0

_PUNCTUATION = str.maketrans("", "", string.punctuation)


def tokenize(text: str) -> list[str]:
    """Lowercase, drop punctuation, split on whitespace."""
    return text.lower().translate(_PUNCTUATION).split()


@dataclass(frozen=True)
class Vocabulary:
    """Dense word <-> index map with the unknown token at index 0."""

    words: tuple[str, ...]
    counts: tuple[int, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.words or self.words[UNKNOWN_INDEX] != UNKNOWN:
            raise InputError(f"vocabulary must start with '{UNKNOWN}'")
        if len(self.counts) != len(self.words):
            raise InputError("vocabulary needs one count per word")
        index = {word: i for i, word in enumerate(self.words)}
        if len(index) != len(self.words):
            raise InputError("vocabulary words must be unique")
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_words(cls, words: Iterable[str]) -> Vocabulary:
        """Vocabulary in the given order (without counts); ``<unk>`` is moved to the front."""
        rest = [w for w in words if w != UNKNOWN]
        ordered = (UNKNOWN, *rest)
        return cls(ordered, (0,) * len(ordered))

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: object) -> bool:
        return word in self._index and word != UNKNOWN

    def index(self, word: str) -> int:
        return self._index.get(word, UNKNOWN_INDEX)

    def word(self, index: int) -> str:
        if not 0 <= index < len(self.words):
            raise InputError(f"index {index} outside vocabulary of size {len(self.words)}")
        return self.words[index]

    def encode(self, tokens: Sequence[str]) -> list[int]:
        return [self.index(token) for token in tokens]

    def oov(self, tokens: Sequence[str]) -> list[str]:
        """Tokens that map to the unknown index."""
        return [token for token in tokens if token not in self]


def build_vocabulary(corpus: Sequence[Sequence[str]], min_count: int = 1) -> Vocabulary:
    """Count tokens and keep those seen at least ``min_count`` times.

    Words are ordered by descending count, then alphabetically; everything
    dropped is folded into the unknown token's count.
    """
    if not corpus:
        raise InputError("cannot build a vocabulary from an empty corpus")
    if min_count < 1:
        raise InputError(f"min_count must be at least 1, got {min_count}")
    counter = Counter(token for sentence in corpus for token in sentence)
    if not counter:
        raise InputError("corpus holds no tokens")
    unknown_count = counter.pop(UNKNOWN, 0)
    kept = sorted(
        ((word, count) for word, count in counter.items() if count >= min_count),
        key=lambda item: (-item[1], item[0]),
    )
    unknown_count += sum(count for count in counter.values() if count < min_count)
    words = (UNKNOWN, *(word for word, _ in kept))
    counts = (unknown_count, *(count for _, count in kept))
    return Vocabulary(words, counts)
