"""Deterministic seeding utilities.

Every stochastic stage derives its own integer seed from the master seed plus
a hierarchical label (region id, repetition, fold, ...).  Because streams are
keyed by label rather than by draw order, running stages in parallel or in a
different order cannot change any result.

The tree kernels (compiled and fallback) consume raw 64-bit seeds through a
SplitMix64 generator implemented identically on both sides, so their outputs
are bitwise equal.
"""

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1


def derive_seed(*tokens) -> int:
    """Collision-resistant 64-bit seed from a label path.

    Stable across platforms and Python versions (SHA-256 based, not ``hash``).
    """
    material = "\x1f".join(str(t) for t in tokens).encode("utf-8")
    return int.from_bytes(hashlib.sha256(material).digest()[:8], "big")


def generator(*tokens) -> np.random.Generator:
    """A numpy Generator seeded from a label path."""
    return np.random.Generator(np.random.PCG64(derive_seed(*tokens)))


class SplitMix64:
    """Minimal 64-bit PRNG with a trivially portable update rule.

    Mirrors the compiled kernel's generator exactly; used wherever the
    pure-Python fallback must reproduce the extension bit for bit.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return (z ^ (z >> 31)) & MASK64

    def next_double(self) -> float:
        # 53-bit mantissa, uniform in [0, 1)
        return (self.next_u64() >> 11) * 2.0**-53

    def next_below(self, n: int) -> int:
        # Modulo bias is irrelevant for n << 2**64 and keeps the compiled
        # kernel's draw sequence reproducible with two lines of C.
        return self.next_u64() % n
