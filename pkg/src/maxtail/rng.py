"""Seeded, splittable random streams.

Streams are PCG64 generators keyed by ``numpy.random.SeedSequence``. A child
stream is identified by its path of integer keys below the root seed, so
replicate ``i`` of an experiment always gets the same stream however many
replicates are run or however the work is divided among workers.
"""
from __future__ import annotations

import numpy as np

__all__ = ["fresh_seed", "child_seed", "make_rng"]


def fresh_seed() -> int:
    """A new 63-bit seed from OS entropy (to be reported to the user)."""
    return int(np.random.SeedSequence().entropy % (2 ** 63))


def child_seed(seed, *keys) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        base_entropy, base_key = seed.entropy, tuple(seed.spawn_key)
    else:
        base_entropy, base_key = seed, ()
    return np.random.SeedSequence(base_entropy, spawn_key=base_key + tuple(int(k) for k in keys))


def make_rng(seed, *keys) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(child_seed(seed, *keys)))
