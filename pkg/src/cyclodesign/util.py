import zlib

import numpy as np


def rng_for(seed: int, name: str) -> np.random.Generator:
    """Independent generator derived from one user seed and a stream name."""
    ss = np.random.SeedSequence(seed, spawn_key=(zlib.crc32(name.encode()),))
    return np.random.default_rng(ss)
