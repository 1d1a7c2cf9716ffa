"""Deterministic, splittable random streams.

Every stochastic operation in the package takes an explicit stream; a
stream is an ordinary ``numpy.random.Generator`` seeded from a
``(master seed, *indices)`` tuple, so identical seeds reproduce identical
sample sequences and sub-streams can be derived without coordination.
"""

from __future__ import annotations

import numpy as np

RngStream = np.random.Generator


def stream(master_seed: int, *indices: int) -> RngStream:
    """Return the deterministic stream identified by (master_seed, *indices).

    Streams with distinct index tuples are statistically independent;
    repeated calls with the same tuple return generators that produce
    identical sequences.
    """
    seq = np.random.SeedSequence((int(master_seed),) + tuple(int(i) for i in indices))
    return np.random.default_rng(seq)


def substreams(master_seed: int, index: int, count: int) -> list[RngStream]:
    """Split (master_seed, index) into `count` per-trial streams."""
    return [stream(master_seed, index, k) for k in range(count)]
