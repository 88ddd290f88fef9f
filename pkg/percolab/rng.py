"""Counter-based seeding.

Every stochastic operation takes an explicit 64-bit seed; nothing reads
ambient randomness. The generator is numpy's Philox, keyed by the seed, so
the i-th uniform of a stream depends only on (seed, i).
"""

from __future__ import annotations

import numpy as np

SEED_MASK = (1 << 64) - 1


def generator(seed: int) -> np.random.Generator:
    """A Philox generator keyed by a 64-bit seed."""
    return np.random.Generator(np.random.Philox(key=int(seed) & SEED_MASK))


def uniforms(seed: int, count: int) -> np.ndarray:
    """The first `count` uniforms of the stream keyed by `seed`.

    Position i of the result is a function of (seed, i) only, which is what
    makes edge sampling independent of iteration order.
    """
    return generator(seed).random(count)


def mix(master_seed: int, *keys: int) -> int:
    """Mix a master seed with integer keys into a new 64-bit seed."""
    entropy = [int(master_seed) & SEED_MASK] + [int(k) & SEED_MASK for k in keys]
    state = np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)
    return int(state[0])


def trial_seed(master_seed: int, trial: int) -> int:
    """Per-trial seed; grid points in a sweep share this schedule."""
    return mix(master_seed, trial)
