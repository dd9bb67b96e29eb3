"""Dict and JSON codecs for commands, events, and snapshots.

Everything that crosses a process boundary (log files, the wire protocol)
goes through these functions, so the Python and browser sides agree on one
shape. canonical_json is byte-stable for hashing: sorted keys, no whitespace,
floats via repr round-trip.
"""

from __future__ import annotations

import hashlib
import json

from . import gestures, interaction
from .world import CubeView, RobotView, Snapshot, WallView


class CodecError(ValueError):
    pass


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def sha256_hex(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


# -- commands ------------------------------------------------------------------

def command_to_dict(cmd) -> dict:
    if isinstance(cmd, interaction.PlaceTarget):
        return {"type": "place_target", "robot_id": cmd.robot_id, "position": list(cmd.position)}
    if isinstance(cmd, interaction.PickTarget):
        return {"type": "pick_target", "robot_id": cmd.robot_id}
    if isinstance(cmd, interaction.DrawWall):
        return {"type": "draw_wall", "a": list(cmd.a), "b": list(cmd.b)}
    if isinstance(cmd, interaction.UndoWall):
        return {"type": "undo_wall"}
    if isinstance(cmd, interaction.PlaceCube):
        return {"type": "place_cube", "position": list(cmd.position)}
    if isinstance(cmd, interaction.PickCube):
        return {"type": "pick_cube"}
    if isinstance(cmd, interaction.ToggleWallMode):
        return {"type": "toggle_wall_mode"}
    raise CodecError(f"unknown command {type(cmd).__name__}")


def _vec2(v) -> tuple[float, float]:
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise CodecError(f"expected [x, y], got {v!r}")
    return (float(v[0]), float(v[1]))


def _vec3(v) -> tuple[float, float, float]:
    if not isinstance(v, (list, tuple)) or len(v) != 3:
        raise CodecError(f"expected [x, y, z], got {v!r}")
    return (float(v[0]), float(v[1]), float(v[2]))


def command_from_dict(d: dict):
    if not isinstance(d, dict):
        raise CodecError(f"command must be an object, got {type(d).__name__}")
    kind = d.get("type")
    try:
        if kind == "place_target":
            return interaction.PlaceTarget(robot_id=int(d["robot_id"]), position=_vec2(d["position"]))
        if kind == "pick_target":
            return interaction.PickTarget(robot_id=int(d["robot_id"]))
        if kind == "draw_wall":
            return interaction.DrawWall(a=_vec2(d["a"]), b=_vec2(d["b"]))
        if kind == "undo_wall":
            return interaction.UndoWall()
        if kind == "place_cube":
            return interaction.PlaceCube(position=_vec2(d["position"]))
        if kind == "pick_cube":
            return interaction.PickCube()
        if kind == "toggle_wall_mode":
            return interaction.ToggleWallMode()
    except (KeyError, TypeError, ValueError) as e:
        raise CodecError(f"bad {kind} command: {e}") from e
    raise CodecError(f"unknown command type {kind!r}")


# -- interaction events ----------------------------------------------------------

def event_to_dict(ev) -> dict:
    if isinstance(ev, gestures.PinchStart):
        return {"type": "pinch_start", "hand": ev.hand, "position": list(ev.position)}
    if isinstance(ev, gestures.PinchMove):
        return {"type": "pinch_move", "hand": ev.hand, "position": list(ev.position)}
    if isinstance(ev, gestures.PinchEnd):
        return {"type": "pinch_end", "hand": ev.hand}
    if isinstance(ev, gestures.TwoHandPinchScale):
        return {"type": "two_hand_pinch_scale", "factor": ev.factor}
    if isinstance(ev, gestures.FlyVector):
        return {"type": "fly_vector", "vector": list(ev.vector)}
    if isinstance(ev, gestures.GraspStart):
        return {"type": "grasp_start", "object_id": ev.object_id}
    if isinstance(ev, gestures.GraspEnd):
        return {"type": "grasp_end", "object_id": ev.object_id, "position": list(ev.position)}
    if isinstance(ev, gestures.Touch):
        return {"type": "touch", "button_id": ev.button_id}
    if isinstance(ev, gestures.MenuShown):
        return {"type": "menu_shown"}
    if isinstance(ev, gestures.MenuHidden):
        return {"type": "menu_hidden"}
    raise CodecError(f"unknown event {type(ev).__name__}")


_HANDS = ("left", "right")


def event_from_dict(d: dict):
    if not isinstance(d, dict):
        raise CodecError(f"event must be an object, got {type(d).__name__}")
    kind = d.get("type")
    try:
        if kind == "pinch_start" or kind == "pinch_move":
            hand = d["hand"]
            if hand not in _HANDS:
                raise CodecError(f"bad hand {hand!r}")
            cls = gestures.PinchStart if kind == "pinch_start" else gestures.PinchMove
            return cls(hand=hand, position=_vec3(d["position"]))
        if kind == "pinch_end":
            hand = d["hand"]
            if hand not in _HANDS:
                raise CodecError(f"bad hand {hand!r}")
            return gestures.PinchEnd(hand=hand)
        if kind == "two_hand_pinch_scale":
            return gestures.TwoHandPinchScale(factor=float(d["factor"]))
        if kind == "fly_vector":
            return gestures.FlyVector(vector=_vec3(d["vector"]))
        if kind == "grasp_start":
            return gestures.GraspStart(object_id=str(d["object_id"]))
        if kind == "grasp_end":
            return gestures.GraspEnd(object_id=str(d["object_id"]), position=_vec3(d["position"]))
        if kind == "touch":
            return gestures.Touch(button_id=str(d["button_id"]))
        if kind == "menu_shown":
            return gestures.MenuShown()
        if kind == "menu_hidden":
            return gestures.MenuHidden()
    except (KeyError, TypeError, ValueError) as e:
        raise CodecError(f"bad {kind} event: {e}") from e
    raise CodecError(f"unknown event type {kind!r}")


# -- snapshots -------------------------------------------------------------------

def snapshot_to_dict(s: Snapshot) -> dict:
    robots = []
    for r in s.robots:
        robots.append({
            "id": r.id, "x": r.x, "y": r.y, "heading": r.heading,
            "radius": r.radius, "max_speed": r.max_speed,
            "max_turn_rate": r.max_turn_rate, "avoid_radius": r.avoid_radius,
            "mode": r.mode,
            "target": list(r.target) if r.target is not None else None,
            "slot": r.slot,
            "walk_heading": r.walk_heading,
            "avoid_side": r.avoid_side,
            "avoid_hold": r.avoid_hold,
        })
    return {
        "tick": s.tick,
        "dt": s.dt,
        "arena": list(s.arena),
        "robots": robots,
        "walls": [{"id": w.id, "a": list(w.a), "b": list(w.b), "ordinal": w.ordinal} for w in s.walls],
        "cube": {"status": s.cube.status, "position": list(s.cube.position), "placed_tick": s.cube.placed_tick},
        "region_counts": list(s.region_counts),
    }


def snapshot_from_dict(d: dict) -> Snapshot:
    try:
        robots = tuple(RobotView(
            id=int(r["id"]), x=float(r["x"]), y=float(r["y"]), heading=float(r["heading"]),
            radius=float(r["radius"]), max_speed=float(r["max_speed"]),
            max_turn_rate=float(r["max_turn_rate"]), avoid_radius=float(r["avoid_radius"]),
            mode=str(r["mode"]),
            target=_vec2(r["target"]) if r.get("target") is not None else None,
            slot=float(r["slot"]) if r.get("slot") is not None else None,
            walk_heading=float(r["walk_heading"]) if r.get("walk_heading") is not None else None,
            avoid_side=int(r["avoid_side"]) if r.get("avoid_side") is not None else None,
            avoid_hold=int(r.get("avoid_hold", 0)),
        ) for r in d["robots"])
        walls = tuple(WallView(
            id=int(w["id"]), a=_vec2(w["a"]), b=_vec2(w["b"]), ordinal=int(w["ordinal"]),
        ) for w in d["walls"])
        cube = d["cube"]
        return Snapshot(
            tick=int(d["tick"]),
            dt=float(d["dt"]),
            arena=(float(d["arena"][0]), float(d["arena"][1])),
            robots=robots,
            walls=walls,
            cube=CubeView(status=str(cube["status"]), position=_vec2(cube["position"]),
                          placed_tick=int(cube["placed_tick"])),
            region_counts=tuple(int(c) for c in d["region_counts"]),
        )
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise CodecError(f"bad snapshot: {e}") from e


def snapshot_hash(s: Snapshot) -> str:
    return sha256_hex(canonical_json(snapshot_to_dict(s)))
