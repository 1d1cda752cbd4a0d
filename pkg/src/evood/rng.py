"""Deterministic random-stream derivation.

All randomness in the package flows from a single root seed.  A stream is
identified by (seed, stream id, *extra key ints); the same triple always
yields the same generator, independent of call order, platform, or how
work is batched.  Per-example streams (e.g. perturbation noise) key on the
example's dataset index so results do not depend on batch composition.
"""

import numpy as np

# Stream ids. Never renumber; logs and checkpoints may reference seeds.
INIT = 1
SHUFFLE = 2
OUTLIER_SAMPLING = 3
OFF_MANIFOLD = 4
SYNTHETIC = 5
SUBSAMPLE = 6
BASELINE_INIT = 7


def stream_rng(seed: int, stream: int, *key: int) -> np.random.Generator:
    """Generator for the given (seed, stream, key...) tuple."""
    return np.random.default_rng([int(seed), int(stream), *map(int, key)])
