"""
Deterministic randomness for the explainer.

A RandomSource is owned by exactly one consumer. Concurrent workers get
their own source through `child()`, which derives a new seed from the
parent seed and a key, so results do not depend on scheduling.
"""
import hashlib
from typing import List, Union

import numpy as np

MAX_SEED = 2**64 - 1


def stable_key(key: Union[str, int]) -> int:
    """Map a string or integer key to a 64-bit integer, stable across processes."""
    if isinstance(key, int):
        return key & MAX_SEED
    digest = hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


class RandomSource:
    """Seeded generator; identical seeds produce identical draw sequences."""

    def __init__(self, seed: int):
        if seed < 0 or seed > MAX_SEED:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self._generator = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))

    def child(self, key: Union[str, int]) -> "RandomSource":
        """Derive an independent source for `key` without consuming draws from this one."""
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=(stable_key(key),))
        return RandomSource(int(sequence.generate_state(1, dtype=np.uint64)[0]))

    def sample_indices(self, population: int, k: int) -> List[int]:
        """Draw min(k, population) distinct indices uniformly without replacement."""
        k = min(k, population)
        if k <= 0:
            return []
        return [int(i) for i in self._generator.choice(population, size=k, replace=False)]

    def normal(self, scale: float, size) -> np.ndarray:
        return self._generator.normal(0.0, scale, size=size)

    def permutation(self, n: int) -> np.ndarray:
        return self._generator.permutation(n)

    def __repr__(self):
        return f"<RandomSource(seed={self.seed})>"
