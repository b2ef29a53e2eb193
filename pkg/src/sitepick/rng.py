"""Deterministic random numbers for reproducible experiment runs.

SplitMix64 is a counter-based generator: the state advances by a fixed
odd increment and each output is an avalanche mix of the counter. Sub-seeds
for (k, run) cells are derived by folding the path components through the
same avalanche function, so a sweep produces identical streams no matter
how its cells are scheduled.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_TWO_NEG_53 = 2.0 ** -53


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a 64-bit avalanche permutation."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(base_seed: int, *path: int) -> int:
    """Mix a base seed with integer path components into a fresh 64-bit seed.

    Order-sensitive: derive_seed(s, k, run) and derive_seed(s, run, k)
    differ, so distinct sweep cells get distinct, schedule-independent
    streams.
    """
    z = base_seed & _MASK64
    for part in path:
        z = mix64(z ^ mix64((part + _GOLDEN) & _MASK64))
    return z


class SplitMix64:
    """Seeded counter-mix generator with the few draws this package needs."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return mix64(self._state)

    def random(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * _TWO_NEG_53

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n) via the multiply-shift reduction."""
        if n <= 0:
            raise ValueError(f"randrange needs n >= 1, got {n}")
        return (self.next_u64() * n) >> 64

    def gauss(self) -> float:
        """Standard normal deviate (Box-Muller, cosine branch)."""
        u1 = ((self.next_u64() >> 11) + 1) * _TWO_NEG_53  # (0, 1]
        u2 = (self.next_u64() >> 11) * _TWO_NEG_53
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(math.tau * u2)
