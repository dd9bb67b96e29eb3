"""Simulation core: world state, command application, fixed-step integration.

The world advances only through step(), one fixed dt at a time. Commands are
applied at the tick boundary in arrival order, then every robot's controller
runs against a frozen view of this tick's state, then poses integrate under
the hard constraints (arena containment, wall impermeability). Determinism:
same seed + same command schedule = byte-identical snapshot stream.

Walls are impassable for robot motion the moment they exist; controllers only
ever see them as expanded blocking points, but the integrator checks the exact
segments so no swept path may come closer than the robot radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import behaviors, rng as rngmod
from .behaviors import BehaviorParams, FormationParams, ObstacleSet
from .geometry import (
    Vec2,
    clamp,
    finite_vec,
    point_segment_distance,
    segment_segment_distance,
    wrap_angle,
)
from .interaction import (
    Command,
    DrawWall,
    PickCube,
    PickTarget,
    PlaceCube,
    PlaceTarget,
    ToggleWallMode,
    UndoWall,
)

MIN_WALL_LENGTH = 1e-3  # walls shorter than 1 mm are rejected as degenerate


@dataclass
class Pose:
    x: float
    y: float
    heading: float  # rad, wrapped to [-pi, pi)


@dataclass(frozen=True)
class Autonomous:
    pass


@dataclass(frozen=True)
class GoToTarget:
    target: Vec2


@dataclass(frozen=True)
class Formation:
    slot: float  # ring slot angle in [0, 2*pi)


Mode = Union[Autonomous, GoToTarget, Formation]

AUTONOMOUS = Autonomous()


@dataclass
class RobotState:
    id: int
    pose: Pose
    radius: float = 0.037
    max_speed: float = 0.05
    max_turn_rate: float = math.pi
    avoid_radius: float = 0.055
    mode: Mode = AUTONOMOUS
    walk_heading: Optional[float] = None  # random-walk turn latch
    avoid_side: Optional[int] = None      # evasion side latch, +1 left / -1 right
    avoid_hold: int = 0                   # clear ticks left before the side releases


@dataclass
class WallSegment:
    id: int
    a: Vec2
    b: Vec2
    ordinal: int  # creation order; undo removes the highest


@dataclass
class ControlCube:
    status: str = "inactive"  # "inactive" | "placed"
    position: Vec2 = (0.0, 0.0)
    placed_tick: int = 0      # formation phase reference


@dataclass
class ArenaSpec:
    width: float
    height: float

    def rect(self) -> tuple[float, float, float, float]:
        return (0.0, 0.0, self.width, self.height)

    def contains(self, p: Vec2, inset: float = 0.0) -> bool:
        return inset <= p[0] <= self.width - inset and inset <= p[1] <= self.height - inset

    def clamp_inside(self, p: Vec2, inset: float = 0.0) -> Vec2:
        return (
            clamp(p[0], inset, self.width - inset),
            clamp(p[1], inset, self.height - inset),
        )


@dataclass
class CommandResult:
    command: Command
    accepted: bool
    error: Optional[str] = None
    note: Optional[str] = None  # e.g. "clamped" when a position was pulled inside


# Snapshot value types. Plain frozen dataclasses, no references back into the
# live world, so they are safe to ship across threads or the wire.

@dataclass(frozen=True)
class RobotView:
    id: int
    x: float
    y: float
    heading: float
    radius: float
    max_speed: float
    max_turn_rate: float
    avoid_radius: float
    mode: str  # "autonomous" | "goto" | "formation"
    target: Optional[Vec2] = None
    slot: Optional[float] = None
    walk_heading: Optional[float] = None
    avoid_side: Optional[int] = None
    avoid_hold: int = 0


@dataclass(frozen=True)
class WallView:
    id: int
    a: Vec2
    b: Vec2
    ordinal: int


@dataclass(frozen=True)
class CubeView:
    status: str
    position: Vec2
    placed_tick: int


@dataclass(frozen=True)
class Snapshot:
    tick: int
    dt: float
    arena: tuple[float, float]
    robots: tuple[RobotView, ...]
    walls: tuple[WallView, ...]
    cube: CubeView
    region_counts: tuple[int, ...]


class WorldState:
    """Owner of all mutable simulation state. Not thread safe by design;
    exactly one loop may drive it."""

    def __init__(self, arena: ArenaSpec, seed: int, dt: float = 0.05,
                 params: Optional[BehaviorParams] = None,
                 formation: Optional[FormationParams] = None,
                 count_regions: Optional[list[tuple[float, float, float, float]]] = None):
        if dt <= 0.0 or not math.isfinite(dt):
            raise ValueError("dt must be positive and finite")
        self.arena = arena
        self.seed = int(seed)
        self.dt = float(dt)
        self.tick = 0
        self.robots: list[RobotState] = []
        self.walls: list[WallSegment] = []
        self.cube = ControlCube()
        self.params = params or BehaviorParams()
        self.formation = formation or FormationParams()
        # Rectangles whose robot counts are reported in every snapshot.
        self.count_regions = list(count_regions or [])

        self._next_robot_id = 0
        self._next_wall_id = 0
        self._streams: dict[int, rngmod.Substream] = {}
        self._wall_version = 0
        self._points_cache: dict[float, tuple] = {}
        self._points_cache_version = -1
        self._seg_arrays = None
        self._static_dirty = True
        self._open_view = ObstacleSet(arena_rect=arena.rect())

    # -- construction ------------------------------------------------------

    def spawn_robot(self, position: Vec2, heading: float = 0.0, *,
                    radius: float = 0.037, max_speed: float = 0.05,
                    max_turn_rate: float = math.pi, avoid_radius: float = 0.055) -> int:
        pos = finite_vec(position)
        if not self.arena.contains(pos, inset=radius):
            raise ValueError(f"spawn at {pos} leaves the arena for radius {radius}")
        for w in self.walls:
            if segment_segment_distance(pos, pos, w.a, w.b) < radius:
                raise ValueError(f"spawn at {pos} overlaps wall {w.id}")
        for r in self.robots:
            if math.hypot(r.pose.x - pos[0], r.pose.y - pos[1]) < r.radius + radius:
                raise ValueError(f"spawn at {pos} overlaps robot {r.id}")
        rid = self._next_robot_id
        self._next_robot_id += 1
        self.robots.append(RobotState(
            id=rid,
            pose=Pose(pos[0], pos[1], wrap_angle(float(heading))),
            radius=radius, max_speed=max_speed,
            max_turn_rate=max_turn_rate, avoid_radius=avoid_radius,
        ))
        self._streams[rid] = rngmod.robot_stream(self.seed, rid)
        self._static_dirty = True
        return rid

    def add_wall(self, a: Vec2, b: Vec2) -> int:
        """Static wall added outside the command flow (scenario setup)."""
        wid, err, _ = self._add_wall_checked(a, b)
        if err:
            raise ValueError(err)
        return wid

    # -- queries -----------------------------------------------------------

    def robot(self, robot_id: int) -> Optional[RobotState]:
        for r in self.robots:
            if r.id == robot_id:
                return r
        return None

    def sim_time(self) -> float:
        return self.tick * self.dt

    def wall_points(self, avoid_radius: float) -> np.ndarray:
        """All blocking points for the given avoidance radius, (P, 2)."""
        return self._wall_point_lists(avoid_radius)[0]

    def _wall_point_lists(self, avoid_radius: float):
        # Cached (ndarray, list-of-tuples) pair: the array feeds the
        # vectorized prune, the list feeds per-robot candidate sets.
        if self._points_cache_version != self._wall_version:
            self._points_cache.clear()
            self._seg_arrays = None
            self._points_cache_version = self._wall_version
        pair = self._points_cache.get(avoid_radius)
        if pair is None:
            chunks = [behaviors.expand_wall_points(w.a, w.b, avoid_radius) for w in self.walls]
            flat = [p for c in chunks for p in c]
            arr = np.array(flat, dtype=float) if flat else np.zeros((0, 2))
            pair = (arr, flat)
            self._points_cache[avoid_radius] = pair
        return pair

    def _wall_arrays(self):
        """Cached (A, B, D, seg2) endpoint arrays for vectorized wall pruning."""
        if self._points_cache_version != self._wall_version:
            self._points_cache.clear()
            self._seg_arrays = None
            self._points_cache_version = self._wall_version
        if self._seg_arrays is None:
            a = np.array([w.a for w in self.walls], dtype=float).reshape(-1, 2)
            b = np.array([w.b for w in self.walls], dtype=float).reshape(-1, 2)
            d = b - a
            seg2 = np.maximum((d * d).sum(axis=1), 1e-300)
            self._seg_arrays = (a, b, d, seg2)
        return self._seg_arrays

    def snapshot(self) -> Snapshot:
        robots = []
        for r in self.robots:
            mode, target, slot = "autonomous", None, None
            if isinstance(r.mode, GoToTarget):
                mode, target = "goto", r.mode.target
            elif isinstance(r.mode, Formation):
                mode, slot = "formation", r.mode.slot
            robots.append(RobotView(
                id=r.id, x=r.pose.x, y=r.pose.y, heading=r.pose.heading,
                radius=r.radius, max_speed=r.max_speed,
                max_turn_rate=r.max_turn_rate, avoid_radius=r.avoid_radius,
                mode=mode, target=target, slot=slot, walk_heading=r.walk_heading,
                avoid_side=r.avoid_side, avoid_hold=r.avoid_hold,
            ))
        counts = []
        for (xmin, ymin, xmax, ymax) in self.count_regions:
            n = 0
            for r in self.robots:
                if xmin <= r.pose.x <= xmax and ymin <= r.pose.y <= ymax:
                    n += 1
            counts.append(n)
        return Snapshot(
            tick=self.tick, dt=self.dt,
            arena=(self.arena.width, self.arena.height),
            robots=tuple(robots),
            walls=tuple(WallView(w.id, w.a, w.b, w.ordinal) for w in self.walls),
            cube=CubeView(self.cube.status, self.cube.position, self.cube.placed_tick),
            region_counts=tuple(counts),
        )

    # -- command application -------------------------------------------------

    def _add_wall_checked(self, a, b):
        try:
            pa, pb = finite_vec(a), finite_vec(b)
        except ValueError as e:
            return -1, str(e), None
        ca = self.arena.clamp_inside(pa)
        cb = self.arena.clamp_inside(pb)
        note = "clamped" if (ca != pa or cb != pb) else None
        if math.hypot(cb[0] - ca[0], cb[1] - ca[1]) < MIN_WALL_LENGTH:
            return -1, "degenerate wall: endpoints coincide", None
        wid = self._next_wall_id
        self._next_wall_id += 1
        self.walls.append(WallSegment(id=wid, a=ca, b=cb, ordinal=wid))
        self._wall_version += 1
        return wid, None, note

    def _apply_command(self, cmd: Command) -> CommandResult:
        if isinstance(cmd, PlaceTarget):
            r = self.robot(cmd.robot_id)
            if r is None:
                return CommandResult(cmd, False, error=f"unknown robot {cmd.robot_id}")
            try:
                pos = finite_vec(cmd.position)
            except ValueError as e:
                return CommandResult(cmd, False, error=str(e))
            clamped = self.arena.clamp_inside(pos, inset=r.radius)
            note = "clamped" if clamped != pos else None
            r.mode = GoToTarget(target=clamped)
            r.walk_heading = None
            r.avoid_side = None
            r.avoid_hold = 0
            return CommandResult(cmd, True, note=note)

        if isinstance(cmd, PickTarget):
            r = self.robot(cmd.robot_id)
            if r is None:
                return CommandResult(cmd, False, error=f"unknown robot {cmd.robot_id}")
            r.mode = AUTONOMOUS
            return CommandResult(cmd, True)

        if isinstance(cmd, DrawWall):
            wid, err, note = self._add_wall_checked(cmd.a, cmd.b)
            if err:
                return CommandResult(cmd, False, error=err)
            return CommandResult(cmd, True, note=note)

        if isinstance(cmd, UndoWall):
            if not self.walls:
                return CommandResult(cmd, True, note="empty")
            newest = max(range(len(self.walls)), key=lambda i: self.walls[i].ordinal)
            self.walls.pop(newest)
            self._wall_version += 1
            return CommandResult(cmd, True)

        if isinstance(cmd, PlaceCube):
            try:
                pos = finite_vec(cmd.position)
            except ValueError as e:
                return CommandResult(cmd, False, error=str(e))
            clamped = self.arena.clamp_inside(pos)
            note = "clamped" if clamped != pos else None
            self.cube.status = "placed"
            self.cube.position = clamped
            self.cube.placed_tick = self.tick
            join_r = self.formation.join_factor * self.formation.ring_radius
            bearings = {}
            for r in self.robots:
                d = math.hypot(r.pose.x - clamped[0], r.pose.y - clamped[1])
                if d <= join_r:
                    bearings[r.id] = math.atan2(r.pose.y - clamped[1], r.pose.x - clamped[0])
            slots = behaviors.formation_slots(bearings)
            for r in self.robots:
                if r.id in slots:
                    r.mode = Formation(slot=slots[r.id])
                    r.walk_heading = None
                    r.avoid_side = None
                    r.avoid_hold = 0
            return CommandResult(cmd, True, note=note)

        if isinstance(cmd, PickCube):
            self.cube.status = "inactive"
            for r in self.robots:
                if isinstance(r.mode, Formation):
                    r.mode = AUTONOMOUS
            return CommandResult(cmd, True)

        if isinstance(cmd, ToggleWallMode):
            # Session-level mode; the world records acceptance so replays of a
            # command log reproduce the same schedule.
            return CommandResult(cmd, True)

        return CommandResult(cmd, False, error=f"unknown command {type(cmd).__name__}")

    # -- stepping ------------------------------------------------------------

    def step(self, commands: tuple[Command, ...] = ()) -> list[CommandResult]:
        results = [self._apply_command(c) for c in commands]
        self._advance()
        self.tick += 1
        return results

    def _refresh_static(self):
        self._radius_arr = np.array([r.radius for r in self.robots])
        self._avoid_arr = np.array([r.avoid_radius for r in self.robots])
        self._look_arr = self.params.lookahead_factor * self._avoid_arr
        self._speed_arr = np.array([r.max_speed for r in self.robots])
        self._static_dirty = False

    @staticmethod
    def _move_ok(old, new, w, radius) -> bool:
        """Whether the straight move old -> new respects wall w.

        Normally the whole swept path must keep the robot radius of
        clearance. If the robot already stands closer than that (a wall was
        drawn over it), the move is allowed as long as it does not come any
        closer, so the robot can work itself free instead of freezing."""
        d0 = point_segment_distance(old, w.a, w.b)
        if d0 < radius:
            return segment_segment_distance(old, new, w.a, w.b) >= d0 - 1e-12
        return segment_segment_distance(old, new, w.a, w.b) >= radius

    @staticmethod
    def _slide(old, v, walls_near, radius, rect):
        """Deflected translation for a move that would breach a wall.

        Projects the motion onto the tangent of each wall the direct move
        violates, in wall order, and returns the first projection whose full
        swept path passes _move_ok for every nearby wall. None if no
        projection does (robot pinned, e.g. wedged in an acute corner). The
        projection never exceeds the direct step length."""
        direct = (old[0] + v[0], old[1] + v[1])
        for w in walls_near:
            if WorldState._move_ok(old, direct, w, radius):
                continue
            tx, ty = w.b[0] - w.a[0], w.b[1] - w.a[1]
            tlen = math.hypot(tx, ty)
            if tlen <= 0.0:
                continue
            tx, ty = tx / tlen, ty / tlen
            dot = v[0] * tx + v[1] * ty
            if abs(dot) < 1e-12:
                continue
            sx = clamp(old[0] + dot * tx, rect[0] + radius, rect[2] - radius)
            sy = clamp(old[1] + dot * ty, rect[1] + radius, rect[3] - radius)
            if (sx, sy) == old:
                continue
            if all(WorldState._move_ok(old, (sx, sy), q, radius)
                   for q in walls_near):
                return (sx, sy)
        return None

    def _advance(self):
        robots = self.robots
        n = len(robots)
        if n == 0:
            return
        if self._static_dirty:
            self._refresh_static()

        pos = np.empty((n, 2))
        for i, r in enumerate(robots):
            pos[i, 0] = r.pose.x
            pos[i, 1] = r.pose.y

        look = self._look_arr
        radius = self._radius_arr

        # Candidate wall points per robot (cheap vectorized prune; the exact
        # cone test happens inside the behavior functions).
        point_rows: dict[int, list] = {}
        if self.walls:
            groups: dict[float, list[int]] = {}
            for i, r in enumerate(robots):
                groups.setdefault(r.avoid_radius, []).append(i)
            for avoid, idxs in groups.items():
                pts, pts_list = self._wall_point_lists(avoid)
                if not len(pts):
                    continue
                sub = pos[idxs]
                d2 = (sub[:, 0:1] - pts[None, :, 0]) ** 2 + (sub[:, 1:2] - pts[None, :, 1]) ** 2
                lim = (look[idxs] + 1e-9) ** 2
                m = d2 <= lim[:, None]
                for k, i in enumerate(idxs):
                    row = m[k]
                    if row.any():
                        point_rows[i] = [pts_list[j] for j in np.nonzero(row)[0]]

        # Candidate neighbor discs per robot.
        disc_rows: dict[int, list] = {}
        if n > 1:
            pos_list = pos.tolist()
            rad_list = self._radius_arr.tolist()
            dx = pos[:, 0:1] - pos[None, :, 0]
            dy = pos[:, 1:2] - pos[None, :, 1]
            d = np.hypot(dx, dy)
            np.fill_diagonal(d, np.inf)
            m = d <= (look[:, None] + radius[None, :] + 1e-9)
            if m.any():
                for i in np.nonzero(m.any(axis=1))[0]:
                    disc_rows[int(i)] = [
                        (pos_list[j][0], pos_list[j][1], rad_list[j])
                        for j in np.nonzero(m[i])[0]
                    ]

        # Walls a robot could possibly touch this tick: current clearance no
        # more than radius + one full step. Only those get the exact swept check.
        near_walls: dict[int, list[WallSegment]] = {}
        if self.walls:
            wa, _, wd, seg2 = self._wall_arrays()
            tpar = ((pos[:, None, :] - wa[None]) * wd[None]).sum(axis=2) / seg2[None]
            np.clip(tpar, 0.0, 1.0, out=tpar)
            cx = wa[None, :, 0] + tpar * wd[None, :, 0]
            cy = wa[None, :, 1] + tpar * wd[None, :, 1]
            dpw = np.hypot(pos[:, 0:1] - cx, pos[:, 1:2] - cy)
            reach = self._radius_arr + self._speed_arr * self.dt + 1e-9
            m = dpw <= reach[:, None]
            for i in np.nonzero(m.any(axis=1))[0]:
                near_walls[int(i)] = [self.walls[j] for j in np.nonzero(m[i])[0]]

        rect = self.arena.rect()
        dt = self.dt
        t = self.sim_time()
        params = self.params
        fparams = self.formation
        cube_pos = self.cube.position
        t_formation = (self.tick - self.cube.placed_tick) * dt

        for i, r in enumerate(robots):
            pts = point_rows.get(i) if point_rows else None
            discs = disc_rows.get(i)
            if pts is None and discs is None:
                view = self._open_view
            else:
                view = ObstacleSet(
                    points=pts if pts is not None else (),
                    discs=discs if discs is not None else (),
                    arena_rect=rect,
                )

            mode = r.mode
            if isinstance(mode, GoToTarget):
                cmd = behaviors.goto_target_step(r, mode.target, view, params, dt)
            elif isinstance(mode, Formation):
                cmd = behaviors.formation_step(
                    r, cube_pos, mode.slot, fparams, t_formation, view, params, dt)
            else:
                cmd = behaviors.random_walk_step(r, view, self._streams[r.id], params, dt)

            # Integrate: heading first, then a straight translation that must
            # respect containment and exact wall clearance. A move that would
            # breach a wall is projected onto that wall's tangent (bump and
            # slide); if no slide passes the full swept check either, the
            # robot stays put for the tick. Clearance is never relaxed.
            h = wrap_angle(r.pose.heading + cmd.turn_rate * dt)
            r.pose.heading = h
            if cmd.forward_speed > 0.0:
                step_len = cmd.forward_speed * dt
                old = (r.pose.x, r.pose.y)
                nx = old[0] + step_len * math.cos(h)
                ny = old[1] + step_len * math.sin(h)
                nx = clamp(nx, rect[0] + r.radius, rect[2] - r.radius)
                ny = clamp(ny, rect[1] + r.radius, rect[3] - r.radius)
                walls_near = near_walls.get(i, ())
                hit = None
                for w in walls_near:
                    if not self._move_ok(old, (nx, ny), w, r.radius):
                        hit = w
                        break
                if hit is not None:
                    nxy = self._slide(old, (nx - old[0], ny - old[1]), walls_near, r.radius, rect)
                    if nxy is None:
                        continue
                    nx, ny = nxy
                r.pose.x = nx
                r.pose.y = ny

        # Arrival checks run on the integrated poses; the flip is visible from
        # the next tick on.
        if not params.hold_at_target:
            for r in robots:
                if isinstance(r.mode, GoToTarget):
                    tx, ty = r.mode.target
                    if math.hypot(tx - r.pose.x, ty - r.pose.y) <= params.arrive_factor * r.radius:
                        r.mode = AUTONOMOUS
