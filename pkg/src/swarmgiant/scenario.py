"""Scenario configs: load, validate, hash, and build worlds from them.

A scenario is a JSON document that fully determines the initial world plus
the mission, so (scenario, command log) is everything a replay needs. The
config hash is the sha256 of the canonical JSON of the normalized document;
the seed is part of it on purpose, replaying a log against a different seed
must be refused loudly rather than silently diverge.
"""

from __future__ import annotations

import copy
import json
import math
from typing import Optional

from .behaviors import BehaviorParams, FormationParams
from .codec import canonical_json, sha256_hex
from .mission import MissionState, TaskRegion
from .world import ArenaSpec, WorldState

FORMAT = 1


class ScenarioError(ValueError):
    pass


_BEHAVIOR_DEFAULTS = {
    "lookahead_factor": 3.0,
    "cone_half_angle": math.pi / 6,
    "goto_gain": 4.0,
    "arrive_factor": 1.5,
    "hold_at_target": False,
    "avoid_margin": 0.2,
}

_FORMATION_DEFAULTS = {
    "ring_radius": 0.3,
    "angular_speed": 0.3,
    "join_factor": 5.0,
    "gain_heading": 4.0,
    "gain_radial": 1.5,
}

_ROBOT_DEFAULTS = {
    "radius": 0.037,
    "max_speed": 0.05,
    "max_turn_rate": math.pi,
    "avoid_radius": 0.055,
}

_MISSION_DEFAULTS = {
    "t_dwell": 5.0,
    "timeout": 1200.0,
}

_OPERATOR_DEFAULTS = {
    "period": 2.0,
    "stale_after": 45.0,
    "door_margin": 0.25,
    "slot_margin": 0.2,
    "slot_spacing": 0.25,
    "entry_depth": 0.15,
    "stage_dist": 0.3,
    "shepherd_dist": 0.35,
    "clearance": 0.06,
    "max_enroute": 3,
}


def _merge(defaults: dict, given: Optional[dict], section: str) -> dict:
    out = dict(defaults)
    for k, v in (given or {}).items():
        if k not in defaults:
            raise ScenarioError(f"unknown key {k!r} in {section}")
        out[k] = v
    return out


class Scenario:
    """Normalized scenario document plus typed accessors."""

    _TOP_KEYS = frozenset((
        "format", "name", "seed", "dt", "arena", "behavior", "formation",
        "robot_defaults", "operator", "robots", "spawn_grid", "walls",
        "regions", "doors", "mission", "snapshot_hz",
    ))

    def __init__(self, data: dict):
        if not isinstance(data, dict):
            raise ScenarioError("scenario must be a JSON object")
        # a misspelled section name would otherwise silently vanish
        for k in data:
            if k not in self._TOP_KEYS:
                raise ScenarioError(f"unknown key {k!r} in scenario")
        d = copy.deepcopy(data)
        if d.get("format", FORMAT) != FORMAT:
            raise ScenarioError(f"unsupported scenario format {d.get('format')!r}")
        self.name = str(d.get("name", "unnamed"))
        try:
            self.seed = int(d["seed"])
        except KeyError:
            raise ScenarioError("scenario needs a seed") from None
        self.dt = float(d.get("dt", 0.05))
        if not (self.dt > 0.0 and math.isfinite(self.dt)):
            raise ScenarioError(f"bad dt {self.dt}")

        arena = d.get("arena") or {}
        self.width = float(arena.get("width", 0.0))
        self.height = float(arena.get("height", 0.0))
        if self.width <= 0 or self.height <= 0:
            raise ScenarioError("arena needs positive width and height")

        self.behavior = _merge(_BEHAVIOR_DEFAULTS, d.get("behavior"), "behavior")
        self.formation = _merge(_FORMATION_DEFAULTS, d.get("formation"), "formation")
        self.robot_defaults = _merge(_ROBOT_DEFAULTS, d.get("robot_defaults"), "robot_defaults")
        self.operator = _merge(_OPERATOR_DEFAULTS, d.get("operator"), "operator")

        self.robots = []
        for i, r in enumerate(d.get("robots", [])):
            merged = dict(self.robot_defaults)
            merged.update({k: v for k, v in r.items() if k in _ROBOT_DEFAULTS})
            for k in r:
                if k not in ("x", "y", "heading", *_ROBOT_DEFAULTS):
                    raise ScenarioError(f"unknown key {k!r} in robots[{i}]")
            self.robots.append({
                "x": float(r["x"]), "y": float(r["y"]),
                "heading": float(r.get("heading", 0.0)), **merged,
            })

        grid = d.get("spawn_grid")
        self.spawn_grid = None
        if grid is not None:
            count = int(grid["count"])
            if count <= 0:
                raise ScenarioError("spawn_grid.count must be positive")
            cols = int(grid.get("cols", math.ceil(math.sqrt(count))))
            self.spawn_grid = {
                "count": count,
                "cols": cols,
                "center": [float(grid["center"][0]), float(grid["center"][1])],
                "spacing": float(grid["spacing"]),
                "heading": float(grid.get("heading", 0.0)),
            }

        self.walls = []
        for i, w in enumerate(d.get("walls", [])):
            a = (float(w["a"][0]), float(w["a"][1]))
            b = (float(w["b"][0]), float(w["b"][1]))
            self.walls.append({"a": list(a), "b": list(b)})

        self.regions = []
        for i, reg in enumerate(d.get("regions", [])):
            rect = tuple(float(v) for v in reg["rect"])
            if len(rect) != 4 or rect[0] >= rect[2] or rect[1] >= rect[3]:
                raise ScenarioError(f"regions[{i}] rect must be [xmin, ymin, xmax, ymax]")
            if not (0 <= rect[0] and rect[2] <= self.width and 0 <= rect[1] and rect[3] <= self.height):
                raise ScenarioError(f"regions[{i}] leaves the arena")
            demand = int(reg["demand"])
            if demand < 0:
                raise ScenarioError(f"regions[{i}] demand must be >= 0")
            self.regions.append({"id": int(reg.get("id", i)), "rect": list(rect), "demand": demand})

        self.doors = []
        for i, door in enumerate(d.get("doors", [])):
            self.doors.append({
                "region": int(door["region"]),
                "a": [float(door["a"][0]), float(door["a"][1])],
                "b": [float(door["b"][0]), float(door["b"][1])],
            })
        for door in self.doors:
            if not any(r["id"] == door["region"] for r in self.regions):
                raise ScenarioError(f"door references unknown region {door['region']}")

        self.mission = _merge(_MISSION_DEFAULTS, d.get("mission"), "mission")
        self.snapshot_hz = float(d.get("snapshot_hz", 1.0 / self.dt))

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        out = {
            "format": FORMAT,
            "name": self.name,
            "seed": self.seed,
            "dt": self.dt,
            "arena": {"width": self.width, "height": self.height},
            "behavior": self.behavior,
            "formation": self.formation,
            "robot_defaults": self.robot_defaults,
            "operator": self.operator,
            "robots": self.robots,
            "walls": self.walls,
            "regions": self.regions,
            "doors": self.doors,
            "mission": self.mission,
            "snapshot_hz": self.snapshot_hz,
        }
        if self.spawn_grid is not None:
            out["spawn_grid"] = self.spawn_grid
        return out

    def config_hash(self) -> str:
        return sha256_hex(canonical_json(self.to_dict()))

    def with_seed(self, seed: int) -> "Scenario":
        d = self.to_dict()
        d["seed"] = int(seed)
        return Scenario(d)

    # -- building ----------------------------------------------------------

    def grid_positions(self):
        g = self.spawn_grid
        if g is None:
            return []
        cols = g["cols"]
        rows = math.ceil(g["count"] / cols)
        cx, cy = g["center"]
        s = g["spacing"]
        out = []
        for k in range(g["count"]):
            row, col = divmod(k, cols)
            out.append((
                cx + (col - (cols - 1) / 2.0) * s,
                cy + (row - (rows - 1) / 2.0) * s,
            ))
        return out

    def task_regions(self) -> list[TaskRegion]:
        return [TaskRegion(id=r["id"], rect=tuple(r["rect"]), demand=r["demand"]) for r in self.regions]

    def build(self) -> tuple[WorldState, Optional[MissionState]]:
        world = WorldState(
            arena=ArenaSpec(self.width, self.height),
            seed=self.seed,
            dt=self.dt,
            params=BehaviorParams(**self.behavior),
            formation=FormationParams(**self.formation),
            count_regions=[tuple(r["rect"]) for r in self.regions],
        )
        try:
            for w in self.walls:
                world.add_wall(tuple(w["a"]), tuple(w["b"]))
            for r in self.robots:
                world.spawn_robot(
                    (r["x"], r["y"]), r["heading"],
                    radius=r["radius"], max_speed=r["max_speed"],
                    max_turn_rate=r["max_turn_rate"], avoid_radius=r["avoid_radius"],
                )
            if self.spawn_grid is not None:
                rd = self.robot_defaults
                for (x, y) in self.grid_positions():
                    world.spawn_robot(
                        (x, y), self.spawn_grid["heading"],
                        radius=rd["radius"], max_speed=rd["max_speed"],
                        max_turn_rate=rd["max_turn_rate"], avoid_radius=rd["avoid_radius"],
                    )
        except ValueError as e:
            raise ScenarioError(str(e)) from e
        mission = None
        if self.regions:
            mission = MissionState(
                regions=self.task_regions(),
                t_dwell=self.mission["t_dwell"],
                timeout=self.mission["timeout"],
            )
        return world, mission


def load_scenario(path) -> Scenario:
    try:
        with open(path) as f:
            data = json.load(f)
    except OSError as e:
        raise ScenarioError(f"cannot read scenario {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ScenarioError(f"scenario {path} is not valid JSON: {e}") from e
    return Scenario(data)


def save_scenario(scenario: Scenario, path) -> None:
    with open(path, "w") as f:
        json.dump(scenario.to_dict(), f, indent=2, sort_keys=True)
        f.write("\n")


# -- built-in reference scenarios ------------------------------------------------

def _open_arena(seed=1):
    return {
        "name": "open-arena",
        "seed": seed,
        "arena": {"width": 0.9, "height": 1.5},
        "spawn_grid": {"count": 12, "cols": 4, "center": [0.45, 0.75], "spacing": 0.12},
    }


def _walled_box(seed=2):
    return {
        "name": "walled-box",
        "seed": seed,
        "arena": {"width": 0.9, "height": 1.5},
        "walls": [
            {"a": [0.2, 0.5], "b": [0.7, 0.5]},
            {"a": [0.45, 0.9], "b": [0.45, 1.3]},
        ],
        "spawn_grid": {"count": 10, "cols": 4, "center": [0.45, 0.25], "spacing": 0.12, "heading": 1.5707963267948966},
    }


def _sealed_cell(seed=3):
    # Ten fast robots locked inside a closed square of walls; the walls must
    # hold them forever.
    lo, hi = 0.15, 1.05
    return {
        "name": "sealed-cell",
        "seed": seed,
        "arena": {"width": 1.2, "height": 1.2},
        "robot_defaults": {"max_speed": 0.25},
        "walls": [
            {"a": [lo, lo], "b": [hi, lo]},
            {"a": [hi, lo], "b": [hi, hi]},
            {"a": [hi, hi], "b": [lo, hi]},
            {"a": [lo, hi], "b": [lo, lo]},
        ],
        "spawn_grid": {"count": 10, "cols": 4, "center": [0.6, 0.6], "spacing": 0.12},
    }


def _formation_arena(seed=4):
    return {
        "name": "formation-arena",
        "seed": seed,
        "arena": {"width": 3.0, "height": 3.0},
        "robot_defaults": {"max_speed": 0.2},
        "spawn_grid": {"count": 6, "cols": 3, "center": [1.5, 1.2], "spacing": 0.3},
    }


def _corridor(seed=5):
    return {
        "name": "corridor",
        "seed": seed,
        "arena": {"width": 0.9, "height": 1.5},
        "robots": [
            {"x": 0.2, "y": 0.2},
            {"x": 0.7, "y": 0.2, "heading": 3.141592653589793},
        ],
    }


def _task_allocation(seed=11):
    # Three demand rooms along the north edge, each with a south-facing door.
    # Demands 25/15/10 for 50 robots spawned in the open south half.
    rooms = [
        # (xmin, xmax, door_lo, door_hi, demand)
        (0.2, 2.2, 0.98, 1.42, 25),
        (2.8, 4.4, 3.38, 3.82, 15),
        (4.9, 5.9, 5.18, 5.62, 10),
    ]
    y0, y1 = 3.0, 4.0
    walls = []
    regions = []
    doors = []
    for i, (x0, x1, dlo, dhi, demand) in enumerate(rooms):
        walls.append({"a": [x0, y0], "b": [x0, y1]})
        walls.append({"a": [x1, y0], "b": [x1, y1]})
        walls.append({"a": [x0, y0], "b": [dlo, y0]})
        walls.append({"a": [dhi, y0], "b": [x1, y0]})
        regions.append({"id": i, "rect": [x0, y0, x1, y1], "demand": demand})
        doors.append({"region": i, "a": [dlo, y0], "b": [dhi, y0]})
    return {
        "name": "task-allocation",
        "seed": seed,
        "arena": {"width": 6.0, "height": 4.0},
        "robot_defaults": {"max_speed": 0.2},
        "walls": walls,
        "regions": regions,
        "doors": doors,
        "spawn_grid": {"count": 50, "cols": 10, "center": [3.0, 1.3], "spacing": 0.22, "heading": 1.5707963267948966},
        "mission": {"t_dwell": 5.0, "timeout": 1200.0},
    }


_BUILTINS = {
    "open-arena": _open_arena,
    "walled-box": _walled_box,
    "sealed-cell": _sealed_cell,
    "formation-arena": _formation_arena,
    "corridor": _corridor,
    "task-allocation": _task_allocation,
}

BUILTIN_NAMES = tuple(sorted(_BUILTINS))


def builtin(name: str, seed: Optional[int] = None) -> Scenario:
    try:
        factory = _BUILTINS[name]
    except KeyError:
        raise ScenarioError(f"unknown builtin scenario {name!r}; have {', '.join(BUILTIN_NAMES)}") from None
    sc = Scenario(factory())
    if seed is not None:
        sc = sc.with_seed(seed)
    return sc


def resolve(name_or_path: str, seed: Optional[int] = None) -> Scenario:
    """Builtin name first, then a file path."""
    if name_or_path in _BUILTINS:
        return builtin(name_or_path, seed)
    sc = load_scenario(name_or_path)
    if seed is not None:
        sc = sc.with_seed(seed)
    return sc
