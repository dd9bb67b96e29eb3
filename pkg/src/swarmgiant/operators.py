"""Scripted operators that play the task-allocation mission.

Strategy 1 allocates robots purely by picking up a robot's target object and
dropping it where it is needed, then repairs the losses as robots wander back
out. Strategy 2 does the same but seals a region's door with a drawn wall
once the region holds exactly its demand, trading a few wall strokes for an
end to the leak-repair treadmill.

Robots cannot plan paths, so the operator does the routing a human would do
by eye: a robot bound for a room is first dropped at the doorway mouth, or at
a staging point south of the door when the direct line is fouled by a wall,
and robots that arrive shallow get pulled deeper into the room afterwards.

Both strategies are deterministic functions of the snapshot stream and their
own bookkeeping. They emit interaction events (grasp, pinch, touch), not raw
commands, so a scripted run exercises the same session plumbing as a live
operator and is charged interactions by the same counting rule.
"""

from __future__ import annotations

import math
import statistics
from typing import Optional

from .gestures import GraspEnd, GraspStart, PinchEnd, PinchMove, PinchStart, Touch
from .geometry import point_segment_distance, segment_segment_distance
from .interaction import BTN_WALL_MODE, SessionState, TARGET_PREFIX
from .runner import RunResult, run_headless


class ScriptedOperator:
    def __init__(self, strategy: int, scenario):
        if strategy not in (1, 2):
            raise ValueError(f"strategy must be 1 or 2, got {strategy}")
        self.strategy = strategy
        op = scenario.operator
        self.period = float(op["period"])
        self.stale_after = float(op["stale_after"])
        self.door_margin = float(op["door_margin"])
        self.entry_depth = float(op["entry_depth"])
        self.stage_dist = float(op["stage_dist"])
        self.shepherd_dist = float(op["shepherd_dist"])
        self.clearance = float(op["clearance"])
        self.max_enroute = int(op["max_enroute"])
        self.regions = sorted(scenario.regions, key=lambda r: r["id"])
        self.doors = {d["region"]: (tuple(d["a"]), tuple(d["b"])) for d in scenario.doors}
        self.walls = [(tuple(w["a"]), tuple(w["b"])) for w in scenario.walls]
        self.dt = scenario.dt
        self.sealed: set[int] = set()
        # journeys in flight: robot id -> (destination region, tick of last
        # hop, lane, consecutive stale rescues). Lanes fan concurrent journeys
        # out across the doorway so no two robots ever chase the same drop
        # point at the same time.
        self.issued: dict[int, tuple[int, int, int, int]] = {}
        self._lane_idx = {r["id"]: 0 for r in self.regions}
        self._slots = {r["id"]: self._fill_slots(r, op) for r in self.regions}
        self._slot_idx = {r["id"]: 0 for r in self.regions}
        self._filled_once: set[int] = set()
        # action tally by kind, for analysis and demos
        self.tally = {"fill": 0, "refill": 0, "continue": 0, "stale": 0,
                      "cancel": 0, "shepherd": 0, "seal": 0}

    def period_ticks(self, dt: float) -> int:
        return max(1, int(round(self.period / dt)))

    @staticmethod
    def _fill_slots(region: dict, op: dict) -> list[tuple[float, float]]:
        """Deterministic drop points: a row-major grid over the deep half of
        the region, far rows first, so arrivals pile up away from the door."""
        xmin, ymin, xmax, ymax = region["rect"]
        m = float(op["slot_margin"])
        s = float(op["slot_spacing"])
        xs, ys = [], []
        x = xmin + m
        while x <= xmax - m + 1e-9:
            xs.append(x)
            x += s
        y = ymin + max(m, 0.45 * (ymax - ymin))
        while y <= ymax - m + 1e-9:
            ys.append(y)
            y += s
        if not xs:
            xs = [(xmin + xmax) / 2]
        if not ys:
            ys = [(ymin + ymax) / 2]
        return [(x, y) for y in reversed(ys) for x in xs]

    def _next_slot(self, region_id: int) -> tuple[float, float]:
        slots = self._slots[region_id]
        i = self._slot_idx[region_id]
        self._slot_idx[region_id] = (i + 1) % len(slots)
        return slots[i]

    def _door_points(self, region_id: int, lane: int) -> tuple[tuple[float, float], tuple[float, float]]:
        """(entry, stage) for one lane: a point just inside the doorway and a
        gather point outside, both offset sideways so parallel journeys do
        not share a drop point."""
        a, b = self.doors[region_id]
        mx, my = (a[0] + b[0]) / 2, (a[1] + b[1]) / 2
        dx, dy = b[0] - a[0], b[1] - a[1]
        length = math.hypot(dx, dy)
        tx, ty = dx / length, dy / length
        nx, ny = -ty, tx
        rect = next(r["rect"] for r in self.regions if r["id"] == region_id)
        cx, cy = (rect[0] + rect[2]) / 2, (rect[1] + rect[3]) / 2
        if nx * (cx - mx) + ny * (cy - my) < 0:
            nx, ny = -nx, -ny
        # Lanes share the approach axis: the stage point sits straight out
        # from its entry point so the final leg runs square through the gap.
        spread = (lane % self.max_enroute) - (self.max_enroute - 1) / 2
        ein = spread * length * 0.28
        entry = (mx + nx * self.entry_depth + tx * ein,
                 my + ny * self.entry_depth + ty * ein)
        stage = (mx - nx * self.stage_dist + tx * ein,
                 my - ny * self.stage_dist + ty * ein)
        return entry, stage

    def _clear_path(self, p: tuple[float, float], q: tuple[float, float]) -> bool:
        for a, b in self.walls:
            if segment_segment_distance(p, q, a, b) <= self.clearance:
                return False
        return True

    def _door_clear(self, region_id: int, snapshot) -> bool:
        door = self.doors.get(region_id)
        if door is None:
            return True
        a, b = door
        for r in snapshot.robots:
            if point_segment_distance((r.x, r.y), a, b) <= self.door_margin:
                return False
        return True

    @staticmethod
    def _region_of(regions, x: float, y: float) -> Optional[int]:
        for reg in regions:
            xmin, ymin, xmax, ymax = reg["rect"]
            if xmin <= x <= xmax and ymin <= y <= ymax:
                return reg["id"]
        return None

    def _route(self, r, region_id: int, lane: int) -> tuple[float, float]:
        """Next drop point that moves robot r toward region_id."""
        here = self._region_of(self.regions, r.x, r.y)
        if here == region_id:
            return self._next_slot(region_id)
        if here is not None:
            # leave the current room through its own door first
            return self._door_points(here, lane)[1]
        entry, stage = self._door_points(region_id, lane)
        if self._clear_path((r.x, r.y), entry):
            return entry
        return stage

    def _place(self, events: list, r, region_id: int, tick: int, lane: int, stales: int = 0) -> None:
        drop = self._route(r, region_id, lane)
        events.append(GraspStart(f"{TARGET_PREFIX}{r.id}"))
        events.append(GraspEnd(f"{TARGET_PREFIX}{r.id}", (drop[0], drop[1], 0.0)))
        self.issued[r.id] = (region_id, tick, lane, stales)

    def decide(self, snapshot, mission) -> list:
        if mission is not None and mission.complete:
            return []
        events: list = []

        by_id = {}
        where: dict[int, Optional[int]] = {}
        inside: dict[int, list] = {r["id"]: [] for r in self.regions}
        for r in snapshot.robots:
            by_id[r.id] = r
            here = self._region_of(self.regions, r.x, r.y)
            where[r.id] = here
            if here is not None:
                inside[here].append(r)

        # A journey ends when the robot stands in its destination region and
        # clear of the doorway; a robot dropped at the door mouth wanders
        # straight back out, so the journey owns it until it sits deep.
        for rid in list(self.issued):
            region_id = self.issued[rid][0]
            if rid not in by_id:
                del self.issued[rid]
                continue
            if where.get(rid) == region_id:
                door = self.doors.get(region_id)
                r = by_id[rid]
                if door is None or point_segment_distance(
                        (r.x, r.y), door[0], door[1]) > self.shepherd_dist:
                    del self.issued[rid]

        demand = {r["id"]: r["demand"] for r in self.regions}
        for reg in self.regions:
            if len(inside[reg["id"]]) >= demand[reg["id"]]:
                self._filled_once.add(reg["id"])
        enroute: dict[int, int] = {r["id"]: 0 for r in self.regions}
        for rid, (region_id, _, _, _) in self.issued.items():
            if where.get(rid) != region_id:
                enroute[region_id] += 1

        # One operator action per decision, in priority order: rescue a stale
        # journey, continue a journey idling between hops, seal (strategy 2),
        # start a journey for the worst deficit, pull a door-side robot deep.
        for rid, (region_id, tick0, lane, stales) in sorted(self.issued.items()):
            if (snapshot.tick - tick0) * self.dt > self.stale_after:
                r = by_id[rid]
                if stales >= 2:
                    # journey is going nowhere; release the robot (and the
                    # enroute budget) by dropping it where it stands
                    events.append(GraspStart(f"{TARGET_PREFIX}{rid}"))
                    events.append(GraspEnd(f"{TARGET_PREFIX}{rid}", (r.x, r.y, 0.0)))
                    del self.issued[rid]
                    self.tally["cancel"] += 1
                else:
                    self._place(events, r, region_id, snapshot.tick, lane, stales + 1)
                    self.tally["stale"] += 1
                return events

        for rid, (region_id, tick0, lane, stales) in sorted(self.issued.items()):
            if by_id[rid].mode == "autonomous":
                self._place(events, by_id[rid], region_id, snapshot.tick, lane)
                self.tally["continue"] += 1
                return events

        if self.strategy == 2:
            for r in self.regions:
                region_id = r["id"]
                if region_id in self.sealed or region_id not in self.doors:
                    continue
                if (len(inside[region_id]) == demand[region_id]
                        and enroute[region_id] == 0
                        and self._door_clear(region_id, snapshot)):
                    a, b = self.doors[region_id]
                    events.append(Touch(BTN_WALL_MODE))
                    events.append(PinchStart("right", (a[0], a[1], 0.0)))
                    events.append(PinchMove("right", (b[0], b[1], 0.0)))
                    events.append(PinchEnd("right"))
                    events.append(Touch(BTN_WALL_MODE))
                    self.sealed.add(region_id)
                    self.tally["seal"] += 1
                    return events

        # Work the rooms in task order, the way a person does: top up the
        # first room with a shortfall before moving on. Spreading placements
        # by deficit instead makes every room reach its demand at the same
        # moment, and then there is no held-full stretch for walls to protect.
        target_region = None
        for r in self.regions:
            region_id = r["id"]
            if region_id in self.sealed or enroute[region_id] >= self.max_enroute:
                continue
            if demand[region_id] - len(inside[region_id]) - enroute[region_id] > 0:
                target_region = region_id
                break
        if target_region is not None:
            lane = self._lane_idx[target_region]
            self._lane_idx[target_region] = (lane + 1) % self.max_enroute
            entry, _ = self._door_points(target_region, lane)
            candidates = []
            for r in snapshot.robots:
                if r.mode != "autonomous" or r.id in self.issued:
                    continue
                here = where[r.id]
                surplus = False
                if here is not None:
                    if here in self.sealed:
                        continue
                    if len(inside[here]) <= demand[here]:
                        continue  # needed where it is
                    surplus = True
                candidates.append((surplus, r))
            if candidates:
                # Surplus robots sitting in an over-full room come first: they
                # are dead capacity there and they block that room's seal.
                _, pick = min(
                    candidates,
                    key=lambda c: (not c[0],
                                   math.hypot(c[1].x - entry[0], c[1].y - entry[1]),
                                   c[1].id))
                self._place(events, pick, target_region, snapshot.tick, lane)
                if target_region in self._filled_once:
                    self.tally["refill"] += 1
                else:
                    self.tally["fill"] += 1
                return events

        shepherd = None
        for r in self.regions:
            region_id = r["id"]
            if region_id in self.sealed or region_id not in self.doors:
                continue
            a, b = self.doors[region_id]
            for robot in inside[region_id]:
                if robot.mode != "autonomous" or robot.id in self.issued:
                    continue
                d = point_segment_distance((robot.x, robot.y), a, b)
                if d <= self.shepherd_dist and (shepherd is None or (d, robot.id) < shepherd[:2]):
                    shepherd = (d, robot.id, region_id, robot)
        if shepherd is not None:
            _, _, region_id, robot = shepherd
            self._place(events, robot, region_id, snapshot.tick, 0)
            self.tally["shepherd"] += 1

        return events


def run_strategy(scenario, strategy: int, seed: Optional[int] = None) -> RunResult:
    sc = scenario if seed is None else scenario.with_seed(seed)
    world, mission = sc.build()
    if mission is None:
        raise ValueError(f"scenario {sc.name!r} has no regions, nothing to allocate")
    policy = ScriptedOperator(strategy, sc)
    return run_headless(world, mission=mission, policy=policy, session=SessionState())


def experiment(scenario, seeds, strategies=(1, 2)) -> dict:
    """Run every (strategy, seed) pair and aggregate the usability measures."""
    rows = []
    for strategy in strategies:
        for seed in seeds:
            res = run_strategy(scenario, strategy, seed)
            m = res.metrics
            rows.append({
                "strategy": strategy,
                "seed": seed,
                "completion_time": m.completion_time,
                "interaction_count": m.interaction_count,
                "timed_out": m.timed_out,
                "breakdown": dict(sorted(m.breakdown.items())),
            })
    summary = {}
    for strategy in strategies:
        sub = [r for r in rows if r["strategy"] == strategy]
        done = [r for r in sub if not r["timed_out"]]
        summary[f"strategy{strategy}"] = {
            "runs": len(sub),
            "completed": len(done),
            "median_interactions": statistics.median(r["interaction_count"] for r in sub) if sub else None,
            "median_completion_time": statistics.median(r["completion_time"] for r in done) if done else None,
        }
    return {"rows": rows, "summary": summary}
