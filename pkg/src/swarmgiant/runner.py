"""Headless simulation driver.

One loop shape serves live runs, scripted-operator experiments, and replays:
observe the snapshot at tick t, let the mission and the operator (policy or
recorded schedule) react, then step the world to t+1. Commands logged at tick
t are exactly the ones applied on the step out of tick t, which is what makes
a command log replayable tick for tick.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .codec import snapshot_hash
from .interaction import SessionState, apply_event, record_results
from .mission import Metrics, MissionState, collect_metrics
from .world import Snapshot, WorldState


@dataclass
class RunResult:
    ticks: int
    final_snapshot: Snapshot
    final_hash: str
    session: SessionState
    mission: Optional[MissionState]
    metrics: Optional[Metrics]
    timed_out: bool
    world: WorldState


def run_headless(world: WorldState,
                 mission: Optional[MissionState] = None,
                 session: Optional[SessionState] = None,
                 policy=None,
                 schedule: Optional[dict[int, list]] = None,
                 duration: Optional[float] = None,
                 max_ticks: Optional[int] = None,
                 snapshot_writer: Optional[Callable[[Snapshot], None]] = None,
                 snapshot_every: int = 1,
                 stop_when_complete: bool = True,
                 on_tick: Optional[Callable[[Snapshot], None]] = None) -> RunResult:
    """Drive the world until completion, timeout, or the tick budget runs out.

    policy: object with period_ticks(dt) and decide(snapshot, mission) -> events.
    schedule: tick -> commands, fed to the world verbatim (replay path).
    """
    if session is None:
        session = SessionState()

    limit = None
    if duration is not None:
        limit = int(round(duration / world.dt))
    if mission is not None:
        t_limit = int(math.ceil(mission.timeout / world.dt))
        limit = t_limit if limit is None else min(limit, t_limit)
    if max_ticks is not None:
        limit = max_ticks if limit is None else min(limit, max_ticks)
    if limit is None:
        if schedule:
            limit = max(schedule) + 1
        else:
            raise ValueError("unbounded run: give duration, max_ticks, or a mission")

    period = policy.period_ticks(world.dt) if policy is not None else 0

    snap = world.snapshot()
    while True:
        if snapshot_writer is not None and world.tick % max(1, snapshot_every) == 0:
            snapshot_writer(snap)
        if on_tick is not None:
            on_tick(snap)
        if mission is not None:
            mission.update(snap)
            if stop_when_complete and mission.complete:
                break
        if world.tick >= limit:
            break

        cmds = []
        if policy is not None and world.tick % period == 0:
            for ev in policy.decide(snap, mission):
                cmds.extend(apply_event(session, ev, snap))
        if schedule is not None:
            cmds.extend(schedule.get(world.tick, []))

        tick_applied = world.tick
        results = world.step(tuple(cmds))
        record_results(session, tick_applied, results)
        snap = world.snapshot()

    timed_out = mission is not None and not mission.complete
    metrics = None
    if mission is not None:
        metrics = collect_metrics(mission, session, world.dt, timed_out=timed_out)
    return RunResult(
        ticks=world.tick,
        final_snapshot=snap,
        final_hash=snapshot_hash(snap),
        session=session,
        mission=mission,
        metrics=metrics,
        timed_out=timed_out,
        world=world,
    )


def replay_run(scenario, schedule: dict[int, list], ticks: int) -> RunResult:
    """Re-run a recorded command schedule against a freshly built world."""
    world, mission = scenario.build()
    return run_headless(
        world,
        mission=mission,
        schedule=schedule,
        max_ticks=ticks,
        stop_when_complete=False,
        duration=None if mission is None else mission.timeout + 1.0,
    )
