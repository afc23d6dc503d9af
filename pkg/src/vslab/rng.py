"""Seeded random streams.

Every stochastic routine takes a ``seed`` that is either an integer or an existing
``numpy.random.Generator``. Integers are expanded through ``SeedSequence`` into a
Philox (counter-based) generator, so substreams can be split deterministically.
"""
import numpy as np


def make_rng(seed=None):
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.Philox(seed))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def split(seed, n):
    """Return `n` independent generators derived from `seed`.

    The i-th child depends only on (seed, i), so work partitioned over workers
    merges to the same result regardless of scheduling.
    """
    if isinstance(seed, np.random.Generator):
        # Consumes parent state, so repeated calls yield fresh children.
        seed = np.random.SeedSequence(seed.integers(0, 2**63, size=4).tolist())
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return [np.random.Generator(np.random.Philox(c)) for c in ss.spawn(n)]


def child_seeds(seed, n):
    """Integer seeds for `n` trials, stable for a given root seed."""
    ss = np.random.SeedSequence(seed)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in ss.spawn(n)]
