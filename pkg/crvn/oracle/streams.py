"""
Reproducible random streams and order-independent moment accumulation.

Every batch of every oracle draws from its own generator, derived from
(seed, purpose, stream, batch). Results therefore do not depend on how batches
are scheduled across processes.
"""
import math
from enum import IntEnum
from typing import Iterator, Tuple

import numpy as np

from crvn.core.config import settings
from crvn.core.errors import OracleError
from crvn.schemas.oracle import OracleEstimate


class Purpose(IntEnum):
    """Top-level key separating the streams of different oracles."""
    METRICS = 0
    HANDOVER = 1
    CAPACITY = 2
    OCCUPANCY = 3


def generator(seed: int, purpose: Purpose, stream: int = 0, batch: int = 0) -> np.random.Generator:
    """Independent generator for one (purpose, stream, batch) under a seed."""
    if seed < 0:
        raise OracleError("seed must be nonnegative")
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(int(purpose), stream, batch))
    return np.random.default_rng(sequence)


def batches(samples: int, batch_size: int = 0) -> Iterator[Tuple[int, int]]:
    """
    Split a sample count into (batch index, batch size) pairs.

    Raises:
        OracleError: If samples < 1
    """
    if samples < 1:
        raise OracleError("samples must be >= 1")
    size = batch_size or settings.ORACLE_BATCH_SIZE
    index = 0
    remaining = samples
    while remaining > 0:
        current = min(size, remaining)
        yield index, current
        remaining -= current
        index += 1


class RunningMoments:
    """Sums and sums of squares of a sampled quantity."""

    def __init__(self) -> None:
        self.count = 0
        self.total = 0.0
        self.total_sq = 0.0

    def add(self, values: np.ndarray) -> None:
        values = np.asarray(values, dtype=float)
        self.count += int(values.size)
        self.total += float(values.sum())
        self.total_sq += float(np.square(values).sum())

    @property
    def mean(self) -> float:
        return self.total / self.count

    @property
    def std_error(self) -> float:
        """Sample standard deviation over sqrt(count); zero for a single sample."""
        if self.count < 2:
            return 0.0
        variance = (self.total_sq - self.count * self.mean**2) / (self.count - 1)
        return math.sqrt(max(0.0, variance) / self.count)

    def estimate(self, seed: int) -> OracleEstimate:
        return OracleEstimate(
            value=self.mean,
            std_error=self.std_error,
            samples=self.count,
            seed=seed,
        )
