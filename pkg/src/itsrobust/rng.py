"""Seedable, splittable random streams.

A stream is addressed by ``(seed, stream_id, *path)`` and mapped onto a
:class:`numpy.random.SeedSequence` spawn key, so any stream can be rebuilt
independently of the order in which work is scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_U64 = 2**64


@dataclass(frozen=True)
class RngSpec:
    seed: int
    stream_id: int = 0
    path: tuple[int, ...] = ()

    def __post_init__(self):
        for v in (self.seed, self.stream_id, *self.path):
            if not (0 <= int(v) < _U64):
                raise ValueError(f"seed and stream ids must be unsigned 64-bit integers, got {v}")

    def child(self, k: int) -> "RngSpec":
        """Sub-stream ``k`` of this stream."""
        return RngSpec(self.seed, self.stream_id, self.path + (int(k),))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream_id), *self.path))
        return np.random.Generator(np.random.PCG64(ss))
