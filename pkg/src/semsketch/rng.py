"""Portable seeded sampling.

SplitMix64 is used instead of :mod:`random` so that shuffles and samples are
reproducible bit-for-bit by any other implementation:

* state advances by ``0x9E3779B97F4A7C15`` (mod 2**64) per draw;
* output mixing is the standard SplitMix64 finalizer;
* ``below(n)`` rejects draws ``>= 2**64 - (2**64 % n)`` and returns ``r % n``;
* ``shuffle`` is Fisher-Yates from the last index down, ``j = below(i + 1)``.
"""

from __future__ import annotations

from typing import MutableSequence, Sequence, TypeVar

T = TypeVar("T")

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def shuffle(self, items: MutableSequence[T]) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample(self, items: Sequence[T], k: int) -> list[T]:
        """Return ``k`` items drawn without replacement, in draw order."""
        if k > len(items):
            raise ValueError(f"cannot sample {k} from {len(items)} items")
        pool = list(items)
        self.shuffle(pool)
        return pool[:k]

    def fork(self) -> "SplitMix64":
        return SplitMix64(self.next_u64())
