"""Counter-derived random streams.

Every stochastic routine in the package receives an explicit
``numpy.random.Generator``.  Streams are derived from a single 64-bit master
seed and a small tuple of counters (replica, layer, component) through
``SeedSequence`` hashing on top of the counter-based Philox generator, so any
parallel schedule over replicas or layers reproduces the sequential results
bit for bit.
"""

from __future__ import annotations

import numpy as np

__all__ = ["substream"]


def substream(master_seed: int, replica: int = 0, layer: int = 0,
              component: int = 0) -> np.random.Generator:
    """Return the generator for (master_seed, replica, layer, component).

    Distinct counter tuples give statistically independent streams; equal
    tuples give bit-identical streams on every platform and thread count.
    """
    if not 0 <= int(master_seed) < 2 ** 64:
        raise ValueError("master_seed must fit in 64 bits")
    ss = np.random.SeedSequence(
        entropy=int(master_seed),
        spawn_key=(int(replica), int(layer), int(component)),
    )
    return np.random.Generator(np.random.Philox(ss))
