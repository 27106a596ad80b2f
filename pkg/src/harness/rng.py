"""
Counter-based random streams for reproducible Monte-Carlo runs

Every block draws from its own Philox generator keyed by (seed, stream,
block index, ...), so results do not depend on how blocks are spread over
workers.
"""
from enum import IntEnum

import numpy as np

RNG_ALGORITHM = "numpy.Philox4x64-10+SeedSequence"


class Stream(IntEnum):
    """Independent substreams of one master seed"""
    BITS = 0
    CALIBRATION_BITS = 1
    NOISE = 2
    RESTARTS = 3


def block_rng(seed: int, stream: Stream, *keys: int) -> np.random.Generator:
    """Generator for one (stream, keys) coordinate of the master seed"""
    sequence = np.random.SeedSequence(seed, spawn_key=(int(stream),) + tuple(int(k) for k in keys))
    return np.random.Generator(np.random.Philox(sequence))
