"""Counter-based random streams keyed by (seed, stream index)."""

from __future__ import annotations

import numpy as np

from ..errors import InvalidConfiguration

SEED_MAX = 2**64 - 1


def check_seed(seed: int) -> int:
    if not isinstance(seed, (int, np.integer)) or not 0 <= seed <= SEED_MAX:
        raise InvalidConfiguration(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    return int(seed)


def stream(seed: int, index: int) -> np.random.Generator:
    """Independent Philox generator for one batch or worker.

    Streams are keyed by index, not by thread, so results do not depend on
    how batches are spread over threads.
    """
    ss = np.random.SeedSequence([check_seed(seed), int(index)])
    return np.random.Generator(np.random.Philox(ss))


class Uniforms:
    """Block-buffered U(0,1) draws from one stream; cheap to pull one at a time."""

    def __init__(self, gen: np.random.Generator, block: int = 1 << 16):
        self.gen = gen
        self.block = block
        self._buf = gen.random(block)
        self._i = 0

    def __call__(self) -> float:
        if self._i == self.block:
            self._buf = self.gen.random(self.block)
            self._i = 0
        u = self._buf[self._i]
        self._i += 1
        return float(u)

    def index(self, n: int) -> int:
        return min(int(self() * n), n - 1)
