"""Task-allocation mission bookkeeping.

A mission is a set of demand regions plus a dwell rule: the mission completes
at the first moment every region has held at least its demanded robot count
continuously for t_dwell seconds. The dwell requirement stops a robot driving
through a region from being counted as allocated to it. Counts are recomputed
from snapshots, never accumulated, so the mission layer stays a pure observer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class TaskRegion:
    id: int
    rect: tuple[float, float, float, float]  # xmin, ymin, xmax, ymax
    demand: int

    def contains(self, x: float, y: float) -> bool:
        xmin, ymin, xmax, ymax = self.rect
        return xmin <= x <= xmax and ymin <= y <= ymax


@dataclass
class MissionState:
    regions: list[TaskRegion]
    t_dwell: float = 5.0
    timeout: float = 1200.0
    dwell: float = 0.0
    complete_tick: Optional[int] = None
    last_counts: tuple[int, ...] = ()

    def update(self, snapshot) -> None:
        """Fold one snapshot into the dwell timer. Completion is latching."""
        counts = []
        for region in self.regions:
            n = 0
            for r in snapshot.robots:
                if region.contains(r.x, r.y):
                    n += 1
            counts.append(n)
        self.last_counts = tuple(counts)
        if self.complete_tick is not None:
            return
        if all(c >= region.demand for c, region in zip(counts, self.regions)):
            self.dwell += snapshot.dt
            if self.dwell >= self.t_dwell:
                self.complete_tick = snapshot.tick
        else:
            self.dwell = 0.0

    @property
    def complete(self) -> bool:
        return self.complete_tick is not None

    def deficits(self) -> tuple[int, ...]:
        return tuple(max(0, reg.demand - c) for reg, c in zip(self.regions, self.last_counts))


@dataclass(frozen=True)
class Metrics:
    completion_time: Optional[float]  # seconds, None on timeout
    interaction_count: int
    breakdown: dict = field(default_factory=dict)  # accepted commands by type
    timed_out: bool = False

    def to_dict(self) -> dict:
        return {
            "completion_time": self.completion_time,
            "interaction_count": self.interaction_count,
            "breakdown": dict(sorted(self.breakdown.items())),
            "timed_out": self.timed_out,
        }


def collect_metrics(mission: MissionState, session, dt: float, timed_out: bool = False) -> Metrics:
    """Final metrics from a finished (or timed out) run."""
    breakdown: dict[str, int] = {}
    for entry in session.command_log:
        if entry.accepted:
            name = type(entry.command).__name__
            breakdown[name] = breakdown.get(name, 0) + 1
    completion = None
    if mission.complete_tick is not None:
        completion = mission.complete_tick * dt
    return Metrics(
        completion_time=completion,
        interaction_count=session.interaction_count,
        breakdown=breakdown,
        timed_out=timed_out,
    )
