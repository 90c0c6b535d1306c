"""SplitMix64: a fixed 64-bit generator for bit-exact reproducibility.

Platform RNGs drift between library versions, so everything that samples
(generator sets, trajectory seeds) draws from this generator.  It is the
standard SplitMix64 recurrence: the state advances by the golden-ratio
increment 0x9E3779B97F4A7C15 and each output is finalized with two
xor-shift-multiply rounds (constants 0xBF58476D1CE4E5B9 and
0x94D049BB133111EB).
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Deterministic 64-bit stream seeded by a single integer."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        return (z ^ (z >> 31)) & MASK64

    def next_below(self, bound: int) -> int:
        """Uniform draw in [0, bound) by rejection on the top multiple."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            value = self.next_u64()
            if value < limit:
                return value % bound


def derive_stream_seeds(master_seed: int, count: int) -> list[int]:
    """Stream-split a master seed into `count` child seeds.

    Child i is the i-th output of SplitMix64(master_seed); the split is
    position-based, so the children do not depend on how work is later
    distributed over threads.
    """
    gen = SplitMix64(master_seed)
    return [gen.next_u64() for _ in range(count)]
