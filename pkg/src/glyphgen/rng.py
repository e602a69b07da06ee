"""Portable deterministic random source for design sampling.

SplitMix64 (Steele, Lea & Flood's mix function) drives every random
choice in the sampler.  It is tiny, well known, and its output for a
given 64-bit seed is identical on every platform and Python version,
which is what makes galleries and session replays reproducible.

Stream splitting rule: the i-th sub-stream of seed ``s`` starts a fresh
generator at ``mix64(s ^ mix64(i + GOLDEN))``.  Batch generation uses
sub-stream i for the i-th sampling attempt, so appending designs later
continues the same lineage without re-rolling earlier ones.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 finalizer: avalanching 64-bit mix."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Seed of sub-stream ``index`` of ``seed`` (see module docstring)."""
    return mix64((seed & MASK64) ^ mix64((index + GOLDEN) & MASK64))


class Rng:
    """Sequential SplitMix64 generator over a 64-bit state."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        return mix64(self._state)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection."""
        if n <= 0:
            raise ValueError("randbelow needs n >= 1")
        limit = (MASK64 + 1) - ((MASK64 + 1) % n)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n

    def choice(self, seq):
        return seq[self.randbelow(len(seq))]

    def uniform(self, lo: float, hi: float) -> float:
        # 53-bit mantissa fraction, like random.random()
        frac = (self.next_u64() >> 11) / float(1 << 53)
        return lo + (hi - lo) * frac
