"""Seeded randomness with per-consumer substreams.

Generator: numpy PCG64 keyed by SeedSequence(seed, spawn_key=(domain, index)).
Robot i draws from (DOMAIN_ROBOT, i), so adding or removing robots never
perturbs another robot's stream, and the operator policy draws from its own
domain. The same (seed, domain, index) triple always yields the same stream.
"""

from __future__ import annotations

import numpy as np

ALGORITHM = "pcg64"

DOMAIN_ROBOT = 0
DOMAIN_POLICY = 1
DOMAIN_SCENARIO = 2


class Substream:
    """One independent PCG64 stream addressed by (seed, domain, index)."""

    __slots__ = ("seed", "domain", "index", "_gen")

    def __init__(self, seed: int, domain: int, index: int):
        self.seed = int(seed)
        self.domain = int(domain)
        self.index = int(index)
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.domain, self.index))
        self._gen = np.random.Generator(np.random.PCG64(seq))

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        return float(self._gen.uniform(lo, hi))

    def integers(self, lo: int, hi: int) -> int:
        # half-open [lo, hi)
        return int(self._gen.integers(lo, hi))

    def __repr__(self):
        return f"Substream(seed={self.seed}, domain={self.domain}, index={self.index})"


def robot_stream(seed: int, robot_id: int) -> Substream:
    return Substream(seed, DOMAIN_ROBOT, robot_id)


def policy_stream(seed: int, index: int = 0) -> Substream:
    return Substream(seed, DOMAIN_POLICY, index)
