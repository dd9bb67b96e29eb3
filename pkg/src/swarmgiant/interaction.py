"""Operator session: maps interaction events to world commands.

The session is the glue between a gesture event stream (one operator) and the
command queue of the simulation. It owns the operator-side state that the
world must not know about: wall drawing mode, which object is currently held,
the pending wall stroke, and the interaction counter used by the mission
metrics. Events it does not understand in the current state are ignored, not
errors; a head-mounted sensor produces plenty of stray events.

Counting rule: only accepted world-changing commands count as interactions
(PlaceTarget, DrawWall, UndoWall, PlaceCube). Perception-only events and mode
toggles are free, as are rejected commands.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .geometry import Vec2, finite_vec
from .gestures import (
    FlyVector,
    GraspEnd,
    GraspStart,
    InteractionEvent,
    MenuHidden,
    MenuShown,
    PinchEnd,
    PinchMove,
    PinchStart,
    Touch,
    TwoHandPinchScale,
)

MIN_WALL_LENGTH = 1e-3

# Object ids the session understands on grasp events.
CUBE_ID = "cube"
TARGET_PREFIX = "target:"

# Button ids.
BTN_WALL_MODE = "draw_wall"
BTN_UNDO_WALL = "undo_wall"


@dataclass(frozen=True)
class PlaceTarget:
    robot_id: int
    position: Vec2


@dataclass(frozen=True)
class PickTarget:
    robot_id: int


@dataclass(frozen=True)
class DrawWall:
    a: Vec2
    b: Vec2


@dataclass(frozen=True)
class UndoWall:
    pass


@dataclass(frozen=True)
class PlaceCube:
    position: Vec2


@dataclass(frozen=True)
class PickCube:
    pass


@dataclass(frozen=True)
class ToggleWallMode:
    pass


Command = Union[PlaceTarget, PickTarget, DrawWall, UndoWall, PlaceCube, PickCube, ToggleWallMode]

COUNTED_COMMANDS = (PlaceTarget, DrawWall, UndoWall, PlaceCube)


@dataclass
class LogEntry:
    tick: int
    command: Command
    accepted: bool
    interaction_count: int  # running count after this command


@dataclass
class SessionState:
    wall_mode: bool = False
    held: Optional[str] = None            # object id currently grasped
    pending_wall_start: Optional[Vec2] = None
    pending_wall_last: Optional[Vec2] = None
    pending_wall_hand: Optional[str] = None
    interaction_count: int = 0
    command_log: list[LogEntry] = field(default_factory=list)
    discarded_walls: int = 0              # degenerate strokes dropped


def _target_robot_id(object_id: str) -> Optional[int]:
    if object_id.startswith(TARGET_PREFIX):
        try:
            return int(object_id[len(TARGET_PREFIX):])
        except ValueError:
            return None
    return None


def apply_event(session: SessionState, event: InteractionEvent, snapshot) -> list[Command]:
    """Translate one event into zero or more commands, updating session state.

    `snapshot` is the most recent world snapshot; it is used to validate grasp
    targets. Commands are returned in emission order and must be fed to the
    world in that order."""
    out: list[Command] = []

    if isinstance(event, GraspStart):
        if session.held is not None:
            return out
        rid = _target_robot_id(event.object_id)
        if rid is not None:
            if any(r.id == rid for r in snapshot.robots):
                session.held = event.object_id
                out.append(PickTarget(robot_id=rid))
        elif event.object_id == CUBE_ID:
            session.held = CUBE_ID
            out.append(PickCube())
        return out

    if isinstance(event, GraspEnd):
        if session.held != event.object_id:
            return out
        session.held = None
        pos = finite_vec((event.position[0], event.position[1]))
        rid = _target_robot_id(event.object_id)
        if rid is not None:
            out.append(PlaceTarget(robot_id=rid, position=pos))
        else:
            out.append(PlaceCube(position=pos))
        return out

    if isinstance(event, PinchStart):
        if session.wall_mode and session.pending_wall_start is None:
            p = finite_vec((event.position[0], event.position[1]))
            session.pending_wall_start = p
            session.pending_wall_last = p
            session.pending_wall_hand = event.hand
        return out

    if isinstance(event, PinchMove):
        if session.pending_wall_start is not None and event.hand == session.pending_wall_hand:
            session.pending_wall_last = finite_vec((event.position[0], event.position[1]))
        return out

    if isinstance(event, PinchEnd):
        if session.pending_wall_start is not None and event.hand == session.pending_wall_hand:
            a = session.pending_wall_start
            b = session.pending_wall_last or a
            session.pending_wall_start = None
            session.pending_wall_last = None
            session.pending_wall_hand = None
            if session.wall_mode:
                dx, dy = b[0] - a[0], b[1] - a[1]
                if (dx * dx + dy * dy) ** 0.5 >= MIN_WALL_LENGTH:
                    out.append(DrawWall(a=a, b=b))
                else:
                    session.discarded_walls += 1
        return out

    if isinstance(event, Touch):
        if event.button_id == BTN_WALL_MODE:
            session.wall_mode = not session.wall_mode
            if not session.wall_mode:
                # Leaving wall mode cancels any unfinished stroke.
                session.pending_wall_start = None
                session.pending_wall_last = None
                session.pending_wall_hand = None
            out.append(ToggleWallMode())
        elif event.button_id == BTN_UNDO_WALL:
            out.append(UndoWall())
        return out

    if isinstance(event, (TwoHandPinchScale, FlyVector, MenuShown, MenuHidden)):
        return out  # perception only, nothing reaches the world

    return out


def record_results(session: SessionState, tick: int, results) -> None:
    """Fold the world's command results for one tick into the session log and
    the interaction counter."""
    for res in results:
        if res.accepted and isinstance(res.command, COUNTED_COMMANDS):
            session.interaction_count += 1
        session.command_log.append(LogEntry(
            tick=tick,
            command=res.command,
            accepted=res.accepted,
            interaction_count=session.interaction_count,
        ))
