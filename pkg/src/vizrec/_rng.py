"""Seed-stream derivation.

All randomness in the package flows from a single run seed. Independent
consumers (dedup, splits, oversampling, per-tree bootstraps, weight init,
bootstrap replicates) pull named sub-streams so that adding or reordering
one consumer never perturbs another, and parallel execution stays
bit-identical to serial execution.
"""

from __future__ import annotations

import hashlib

import numpy as np


def substream(seed: int, *names: str | int) -> np.random.Generator:
    """Return a Generator for the sub-stream identified by ``names``.

    The names are hashed into the seed sequence, so ``substream(7, "split")``
    and ``substream(7, "oversample")`` are statistically independent and
    stable across runs and platforms.
    """
    digest = hashlib.blake2b("/".join(str(n) for n in names).encode("utf-8"), digest_size=16).digest()
    words = [int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed) & 0xFFFFFFFF, *words])))


def spawn_seed(seed: int, *names: str | int) -> int:
    """Derive a 32-bit integer seed for code that cannot take a Generator."""
    return int(substream(seed, *names).integers(0, 2**31 - 1))
