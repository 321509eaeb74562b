"""Counter-based deterministic random numbers.

Scene generation and the benchmark action scripts must produce identical
output on every host, so nothing here touches global RNG state or the
platform ``hash``. A SplitMix64 stream keyed by explicit integers is used
throughout: same key, same sequence, everywhere.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def stable_hash(text: str) -> int:
    """64-bit FNV-1a of a string; stable across hosts and sessions."""
    h = 0xCBF29CE484222325
    for b in text.encode("utf-8"):
        h = ((h ^ b) * 0x100000001B3) & _MASK
    return h


class CounterRng:
    """SplitMix64 stream over (key, counter) pairs."""

    def __init__(self, *key_parts: int | str):
        key = 0
        for part in key_parts:
            v = stable_hash(part) if isinstance(part, str) else int(part) & _MASK
            key = _splitmix64(key ^ v)
        self._key = key
        self._counter = 0

    def next_u64(self) -> int:
        self._counter += 1
        return _splitmix64((self._key + self._counter * 0x9E3779B97F4A7C15) & _MASK)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        # 53 mantissa bits -> exact double in [0, 1)
        u = self.next_u64() >> 11
        return lo + (hi - lo) * (u / float(1 << 53))

    def randint(self, lo: int, hi: int) -> int:
        """Integer in [lo, hi] inclusive."""
        if hi < lo:
            raise ValueError("empty range")
        span = hi - lo + 1
        return lo + self.next_u64() % span

    def choice(self, seq):
        if not seq:
            raise ValueError("empty sequence")
        return seq[self.randint(0, len(seq) - 1)]

    def shuffle(self, seq: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(seq) - 1, 0, -1):
            j = self.randint(0, i)
            seq[i], seq[j] = seq[j], seq[i]
