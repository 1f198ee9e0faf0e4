"""Deterministic derivation of independent RNG streams from a master seed.

Streams are identified by an integer path appended to the master seed and
hashed through numpy's SeedSequence, so derived seeds are well mixed and
independent of any execution order.
"""

from __future__ import annotations

import numpy as np

__all__ = ["seed_sequence", "rng_from", "derive_seed"]


def seed_sequence(master: int, *path: int) -> np.random.SeedSequence:
    entropy = [int(master)] + [int(p) for p in path]
    if any(e < 0 for e in entropy):
        raise ValueError("seed path components must be nonnegative integers")
    return np.random.SeedSequence(entropy)


def rng_from(master: int, *path: int) -> np.random.Generator:
    return np.random.default_rng(seed_sequence(master, *path))


def derive_seed(master: int, *path: int) -> int:
    """A 64-bit seed hashed from (master, *path); distinct paths decorrelate."""
    words = seed_sequence(master, *path).generate_state(2, np.uint32)
    return (int(words[0]) << 32) | int(words[1])
