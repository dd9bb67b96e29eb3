"""Hand-tracking gesture recognition.

Consumes per-frame hand poses (a Leap-style sensor feed or a recorded trace)
and emits discrete interaction events. All detection is stateful but strictly
deterministic: the same frame sequence always yields the same event sequence,
which is what makes recorded traces usable as regression fixtures.

Coordinate conventions: hand poses are in sensor space, meters, y up. Finger
distance thresholds (pinch, grasp release) are physical sensor distances.
Event positions are mapped into world space through the avatar transform
p_world = avatar.position + p_sensor / world_scale, and object/button bounds
are given in world space.

Emission order inside one frame is fixed: lost-hand cleanup, grasp, pinch,
two-hand scale, fly, touch, menu. Left hand before right in each phase.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .geometry import clamp

Vec3 = tuple[float, float, float]

UP: Vec3 = (0.0, 1.0, 0.0)


@dataclass(frozen=True)
class HandPose:
    palm_position: Vec3
    palm_normal: Vec3
    thumb_tip: Vec3
    index_tip: Vec3
    grab_strength: float  # 0 open .. 1 fist


@dataclass(frozen=True)
class HandFrame:
    timestamp: float
    left: Optional[HandPose] = None
    right: Optional[HandPose] = None


# -- events ------------------------------------------------------------------

@dataclass(frozen=True)
class PinchStart:
    hand: str
    position: Vec3  # world


@dataclass(frozen=True)
class PinchMove:
    hand: str
    position: Vec3


@dataclass(frozen=True)
class PinchEnd:
    hand: str


@dataclass(frozen=True)
class TwoHandPinchScale:
    factor: float  # hand separation relative to gesture start


@dataclass(frozen=True)
class FlyVector:
    vector: Vec3  # sensor meters, displacement of the closed-hands midpoint


@dataclass(frozen=True)
class GraspStart:
    object_id: str


@dataclass(frozen=True)
class GraspEnd:
    object_id: str
    position: Vec3  # world release point


@dataclass(frozen=True)
class Touch:
    button_id: str


@dataclass(frozen=True)
class MenuShown:
    pass


@dataclass(frozen=True)
class MenuHidden:
    pass


InteractionEvent = Union[
    PinchStart, PinchMove, PinchEnd, TwoHandPinchScale, FlyVector,
    GraspStart, GraspEnd, Touch, MenuShown, MenuHidden,
]


@dataclass
class AvatarState:
    """Operator viewpoint: a giant standing in the world.

    world_scale > 1 means the world looks smaller (the giant grew). wall_mode
    mirrors the session toggle so the recognizer can tell a two-hand resize
    from two simultaneous wall strokes."""
    position: Vec3 = (0.0, 0.0, 0.0)
    world_scale: float = 1.0
    wall_mode: bool = False


@dataclass(frozen=True)
class SceneObject:
    id: str
    lo: Vec3  # axis-aligned bounds, world space
    hi: Vec3


@dataclass
class Scene:
    graspables: list[SceneObject] = field(default_factory=list)
    buttons: list[SceneObject] = field(default_factory=list)


@dataclass
class GestureParams:
    pinch_engage: float = 0.02        # m, thumb-index distance to start
    pinch_release: float = 0.03       # m, hysteresis: 1.5x engage
    closed_threshold: float = 0.99    # grab_strength for a closed fist
    menu_show_dot: float = 0.8        # palm-normal dot up to show the menu
    menu_hide_dot: float = 0.7
    touch_debounce: float = 0.3       # s per button
    fly_gain: float = 2.0             # 1/s
    grasp_inflate: float = 0.005      # m added around graspable bounds
    grasp_release_extra: float = 0.02 # m of tip separation growth to let go
    scale_min: float = 0.1
    scale_max: float = 100.0


def apply_scale(avatar: AvatarState, factor: float) -> None:
    """Multiply the avatar world scale by factor, clamped to the legal range."""
    if factor <= 0.0 or not math.isfinite(factor):
        raise ValueError(f"bad scale factor {factor!r}")
    avatar.world_scale = clamp(avatar.world_scale * factor, GestureParams.scale_min, GestureParams.scale_max)


def _mid(a: Vec3, b: Vec3) -> Vec3:
    return ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2, (a[2] + b[2]) / 2)


def _d3(a: Vec3, b: Vec3) -> float:
    return math.sqrt((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2 + (a[2] - b[2]) ** 2)


def _inside(p: Vec3, lo: Vec3, hi: Vec3, pad: float = 0.0) -> bool:
    return all(lo[i] - pad <= p[i] <= hi[i] + pad for i in range(3))


class _HandTrack:
    __slots__ = ("pinching", "announced", "grasp_id", "grasp_start_sep", "closed",
                 "pinch_mid_world", "touch_inside")

    def __init__(self):
        self.pinching = False
        self.announced = False   # PinchStart emitted and not yet ended
        self.grasp_id: Optional[str] = None
        self.grasp_start_sep = 0.0
        self.closed = False
        self.pinch_mid_world: Vec3 = (0.0, 0.0, 0.0)
        self.touch_inside: dict[str, bool] = {}


class GestureFsm:
    """Stateful recognizer; feed frames in timestamp order via update()."""

    def __init__(self, params: Optional[GestureParams] = None, avatar: Optional[AvatarState] = None):
        self.params = params or GestureParams()
        self.avatar = avatar or AvatarState()
        self.hands = {"left": _HandTrack(), "right": _HandTrack()}
        self.last_timestamp: Optional[float] = None
        self.dropped_frames = 0
        self.capturing = False     # two-hand scale in progress
        self._capture_d0 = 0.0
        self._capture_base = 1.0
        self.flying = False
        self._fly_origin: Vec3 = (0.0, 0.0, 0.0)
        self.menu_shown = False
        self._touch_last_fire: dict[str, float] = {}

    def to_world(self, p: Vec3) -> Vec3:
        a = self.avatar
        s = a.world_scale
        return (a.position[0] + p[0] / s, a.position[1] + p[1] / s, a.position[2] + p[2] / s)

    def update(self, frame: HandFrame, scene: Optional[Scene] = None) -> list[InteractionEvent]:
        scene = scene or Scene()
        p = self.params
        if self.last_timestamp is not None and frame.timestamp <= self.last_timestamp:
            self.dropped_frames += 1
            return []
        dt = 0.0 if self.last_timestamp is None else frame.timestamp - self.last_timestamp
        self.last_timestamp = frame.timestamp

        events: list[InteractionEvent] = []
        poses = {"left": frame.left, "right": frame.right}

        # Lost hands: close out grasp and pinch, left first.
        for side in ("left", "right"):
            hand = self.hands[side]
            if poses[side] is None:
                if hand.grasp_id is not None:
                    events.append(GraspEnd(hand.grasp_id, hand.pinch_mid_world))
                    hand.grasp_id = None
                if hand.announced:
                    events.append(PinchEnd(side))
                    hand.announced = False
                hand.pinching = False
                hand.closed = False
                hand.touch_inside.clear()

        # Grasp has priority over pinch: a hand holding an object neither
        # pinches nor touches until it lets go.
        for side in ("left", "right"):
            pose = poses[side]
            if pose is None:
                continue
            hand = self.hands[side]
            sep = _d3(pose.thumb_tip, pose.index_tip)
            tips_mid_world = self.to_world(_mid(pose.thumb_tip, pose.index_tip))
            hand.pinch_mid_world = tips_mid_world
            if hand.grasp_id is not None:
                if sep > hand.grasp_start_sep + p.grasp_release_extra:
                    events.append(GraspEnd(hand.grasp_id, tips_mid_world))
                    hand.grasp_id = None
            elif not hand.pinching and pose.grab_strength < p.closed_threshold:
                thumb_w = self.to_world(pose.thumb_tip)
                index_w = self.to_world(pose.index_tip)
                for obj in scene.graspables:
                    if (_inside(thumb_w, obj.lo, obj.hi, p.grasp_inflate)
                            and _inside(index_w, obj.lo, obj.hi, p.grasp_inflate)
                            and not any(h.grasp_id == obj.id for h in self.hands.values())):
                        hand.grasp_id = obj.id
                        hand.grasp_start_sep = sep
                        events.append(GraspStart(obj.id))
                        break

        # Pinch latches with hysteresis. A closed fist cannot pinch, which
        # keeps fly and resize mutually exclusive.
        for side in ("left", "right"):
            pose = poses[side]
            if pose is None:
                continue
            hand = self.hands[side]
            sep = _d3(pose.thumb_tip, pose.index_tip)
            if hand.grasp_id is not None:
                hand.pinching = False
            elif hand.pinching:
                if sep > p.pinch_release:
                    hand.pinching = False
            else:
                if sep <= p.pinch_engage and pose.grab_strength < p.closed_threshold:
                    hand.pinching = True
            hand.closed = pose.grab_strength >= p.closed_threshold

        # Two-hand scale capture: both pinching outside wall mode. Captured
        # hands stop emitting per-hand pinch events until the capture ends.
        lh, rh = self.hands["left"], self.hands["right"]
        want_capture = (
            lh.pinching and rh.pinching
            and not self.avatar.wall_mode
            and lh.grasp_id is None and rh.grasp_id is None
            and poses["left"] is not None and poses["right"] is not None
        )
        capture_started = False
        if want_capture and not self.capturing:
            for side in ("left", "right"):
                if self.hands[side].announced:
                    events.append(PinchEnd(side))
                    self.hands[side].announced = False
            self.capturing = True
            capture_started = True
            self._capture_d0 = _d3(
                _mid(poses["left"].thumb_tip, poses["left"].index_tip),
                _mid(poses["right"].thumb_tip, poses["right"].index_tip))
            self._capture_base = self.avatar.world_scale
        elif self.capturing and not want_capture:
            self.capturing = False

        # Per-hand pinch events for uncaptured hands.
        if not self.capturing:
            for side in ("left", "right"):
                pose = poses[side]
                hand = self.hands[side]
                if pose is None:
                    continue
                if hand.pinching and not hand.announced:
                    events.append(PinchStart(side, hand.pinch_mid_world))
                    hand.announced = True
                elif hand.pinching and hand.announced:
                    events.append(PinchMove(side, hand.pinch_mid_world))
                elif not hand.pinching and hand.announced:
                    events.append(PinchEnd(side))
                    hand.announced = False

        # Scale factor relative to the capture baseline; no event on the
        # baseline frame itself.
        if self.capturing and not capture_started and self._capture_d0 > 1e-9:
            d = _d3(
                _mid(poses["left"].thumb_tip, poses["left"].index_tip),
                _mid(poses["right"].thumb_tip, poses["right"].index_tip))
            factor = d / self._capture_d0
            events.append(TwoHandPinchScale(factor))
            self.avatar.world_scale = clamp(self._capture_base * factor, p.scale_min, p.scale_max)

        # Fly: both fists closed, vector measured from the closing midpoint.
        both_closed = (
            poses["left"] is not None and poses["right"] is not None
            and lh.closed and rh.closed
        )
        if both_closed:
            mid = _mid(poses["left"].palm_position, poses["right"].palm_position)
            if not self.flying:
                self.flying = True
                self._fly_origin = mid
                events.append(FlyVector((0.0, 0.0, 0.0)))
            else:
                vec = (mid[0] - self._fly_origin[0], mid[1] - self._fly_origin[1], mid[2] - self._fly_origin[2])
                events.append(FlyVector(vec))
                s = self.avatar.world_scale
                g = p.fly_gain * dt / s
                ax, ay, az = self.avatar.position
                self.avatar.position = (ax + g * vec[0], ay + g * vec[1], az + g * vec[2])
        else:
            self.flying = False

        # Touch buttons with an index fingertip; idle hands only.
        for side in ("left", "right"):
            pose = poses[side]
            if pose is None:
                continue
            hand = self.hands[side]
            if hand.pinching or hand.grasp_id is not None or hand.closed:
                continue
            tip = self.to_world(pose.index_tip)
            for btn in scene.buttons:
                inside = _inside(tip, btn.lo, btn.hi)
                was = hand.touch_inside.get(btn.id, False)
                if inside and not was:
                    last = self._touch_last_fire.get(btn.id)
                    if last is None or frame.timestamp - last >= p.touch_debounce:
                        events.append(Touch(btn.id))
                        self._touch_last_fire[btn.id] = frame.timestamp
                hand.touch_inside[btn.id] = inside

        # Menu on a left palm turned up, with hysteresis on the dot product.
        left = poses["left"]
        if left is not None:
            dot = left.palm_normal[0] * UP[0] + left.palm_normal[1] * UP[1] + left.palm_normal[2] * UP[2]
            if not self.menu_shown and dot > p.menu_show_dot:
                self.menu_shown = True
                events.append(MenuShown())
            elif self.menu_shown and dot < p.menu_hide_dot:
                self.menu_shown = False
                events.append(MenuHidden())
        elif self.menu_shown:
            self.menu_shown = False
            events.append(MenuHidden())

        return events


# -- trace files ---------------------------------------------------------------

def _pose_to_dict(pose: Optional[HandPose]):
    if pose is None:
        return None
    return {
        "palm": list(pose.palm_position),
        "normal": list(pose.palm_normal),
        "thumb": list(pose.thumb_tip),
        "index": list(pose.index_tip),
        "grab": pose.grab_strength,
    }


def _pose_from_dict(d) -> Optional[HandPose]:
    if d is None:
        return None
    return HandPose(
        palm_position=tuple(d["palm"]),
        palm_normal=tuple(d["normal"]),
        thumb_tip=tuple(d["thumb"]),
        index_tip=tuple(d["index"]),
        grab_strength=float(d["grab"]),
    )


def write_trace(path, frames: list[HandFrame]) -> None:
    with open(path, "w") as f:
        for fr in frames:
            f.write(json.dumps({
                "t": fr.timestamp,
                "left": _pose_to_dict(fr.left),
                "right": _pose_to_dict(fr.right),
            }) + "\n")


def read_trace(path) -> list[HandFrame]:
    frames = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            d = json.loads(line)
            frames.append(HandFrame(
                timestamp=float(d["t"]),
                left=_pose_from_dict(d.get("left")),
                right=_pose_from_dict(d.get("right")),
            ))
    return frames


def run_trace(frames: list[HandFrame], scene: Optional[Scene] = None,
              params: Optional[GestureParams] = None,
              avatar: Optional[AvatarState] = None) -> list[InteractionEvent]:
    """Feed a whole trace through a fresh FSM and collect the events."""
    fsm = GestureFsm(params=params, avatar=avatar)
    out: list[InteractionEvent] = []
    for fr in frames:
        out.extend(fsm.update(fr, scene))
    return out
