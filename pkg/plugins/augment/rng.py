#!/usr/bin/env python3
"""
Seeded Random Streams
Splittable, reproducible generators built on numpy's SeedSequence/PCG64
"""

import zlib
from typing import Tuple, Union

import numpy as np

ALGORITHM = "PCG64"

StreamId = Union[int, str]


def _stream_key(stream_id: StreamId) -> int:
    if isinstance(stream_id, str):
        return zlib.crc32(stream_id.encode("utf-8"))
    if stream_id < 0:
        raise ValueError(f"stream ids must be non-negative, got {stream_id}")
    return int(stream_id)


class Rng:
    """A seeded stream; child streams are keyed by (seed, path of stream ids).

    Two Rng objects with the same seed and key produce the same draws.
    The underlying numpy Generator is created on first use and then advances.
    """

    algorithm = ALGORITHM

    def __init__(self, seed: int, key: Tuple[int, ...] = ()):
        self.seed = int(seed)
        self.key = tuple(key)
        self._generator = None

    def child(self, *stream_ids: StreamId) -> 'Rng':
        return Rng(self.seed, self.key + tuple(_stream_key(s) for s in stream_ids))

    @property
    def generator(self) -> np.random.Generator:
        if self._generator is None:
            sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=self.key)
            self._generator = np.random.Generator(np.random.PCG64(sequence))
        return self._generator

    def uniform(self, low: float, high: float) -> float:
        return float(self.generator.uniform(low, high))

    def random(self) -> float:
        return float(self.generator.random())

    def __repr__(self) -> str:
        return f"Rng(seed={self.seed}, key={self.key}, algorithm={self.algorithm})"
