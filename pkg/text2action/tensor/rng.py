"""Seeded random streams.

Every stream is numpy's ``Generator`` on the PCG64 bit generator; Gaussian
draws use numpy's ziggurat ``standard_normal``. Both are covered by numpy's
stream-compatibility policy, so a seed reproduces across builds.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .tensor import Tensor


class SeededRng:
    """Deterministic random stream identified by a 64-bit seed."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        self.path: tuple[int, ...] = ()
        self._generator = np.random.Generator(np.random.PCG64(self.seed))

    def spawn(self, key: int) -> SeededRng:
        """Independent child stream derived from the seed and the keys leading to it."""
        child = SeededRng.__new__(SeededRng)
        child.seed = self.seed
        child.path = (*self.path, int(key))
        sequence = np.random.SeedSequence([self.seed & 0xFFFFFFFFFFFFFFFF, *child.path])
        child._generator = np.random.Generator(np.random.PCG64(sequence))
        return child

    def normal(self, shape: Sequence[int] | int) -> np.ndarray:
        return self._generator.standard_normal(shape)

    def uniform(self, low: float, high: float, shape: Sequence[int] | int) -> np.ndarray:
        return self._generator.uniform(low, high, shape)

    def random(self, size: int) -> np.ndarray:
        return self._generator.random(size)

    def integers(self, low: int, high: int) -> int:
        return int(self._generator.integers(low, high))

    def permutation(self, n: int) -> np.ndarray:
        return self._generator.permutation(n)


def sample_gaussian(rng: SeededRng, shape: Sequence[int] | int) -> Tensor:
    """I.i.d. standard normal samples."""
    return Tensor(rng.normal(shape))
