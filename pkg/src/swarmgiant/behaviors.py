"""Per-robot control behaviors.

Every function here is a pure step: it looks at one robot plus a frozen view
of its surroundings and returns a VelocityCommand for the next tick. The only
state a behavior owns is the robot's `walk_heading` latch (random walk) which
it updates in place. Obstacle queries use blocking points and discs already
pruned by the caller; behaviors never see the whole world.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .geometry import Vec2, clamp, wrap_angle

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class VelocityCommand:
    forward_speed: float  # m/s, >= 0
    turn_rate: float      # rad/s, signed


@dataclass
class ObstacleSet:
    """Frozen local view: wall blocking points, neighbor discs, arena rect.

    points: (x, y) pairs. discs: (x, y, radius) triples. These are small,
    already pruned candidate sets, which is why plain sequences beat arrays
    here. arena_rect: (xmin, ymin, xmax, ymax) or None for an unbounded plane.
    """

    points: Sequence[tuple[float, float]] = ()
    discs: Sequence[tuple[float, float, float]] = ()
    arena_rect: Optional[tuple[float, float, float, float]] = None


EMPTY_OBSTACLES = ObstacleSet()


@dataclass
class BehaviorParams:
    lookahead_factor: float = 3.0       # cone range = factor * avoid_radius
    cone_half_angle: float = math.pi / 6
    goto_gain: float = 4.0              # P gain on bearing error, 1/s
    arrive_factor: float = 1.5          # arrival radius = factor * robot radius
    hold_at_target: bool = False        # stay parked at the target vs resume autonomy
    avoid_margin: float = 0.2           # extra heading clearance past the cone edge, rad
    avoid_hold_ticks: int = 10          # keep the evasion side through clear gaps this long


@dataclass
class FormationParams:
    ring_radius: float = 0.3
    angular_speed: float = 0.3          # rad/s around the cube
    join_factor: float = 5.0            # join radius = factor * ring_radius
    gain_heading: float = 4.0
    gain_radial: float = 1.5


def nearest_blocking(robot, obstacles: ObstacleSet, params: BehaviorParams):
    """Nearest obstacle inside the lookahead cone, or None.

    Returns (distance, bearing, kind, hard) for the closest blocking point,
    disc surface, or boundary exit point; kind is "point", "disc" or
    "boundary" and hard says whether anything immovable (a point or the
    boundary, as opposed to a neighbor disc) sits in the cone at all. The
    arena boundary counts as blocked when the probe point one lookahead
    ahead leaves the rect inset by the robot radius. Ties keep the first
    hit in points-then-discs-then-boundary order.
    """
    px, py = robot.pose.x, robot.pose.y
    heading = robot.pose.heading
    look = params.lookahead_factor * robot.avoid_radius
    cos_half = math.cos(params.cone_half_angle)
    ux, uy = math.cos(heading), math.sin(heading)

    best_d = math.inf
    best_dx = best_dy = 0.0
    best_kind = ""
    hard = False

    for (ox, oy) in obstacles.points:
        dx = ox - px
        dy = oy - py
        d = math.hypot(dx, dy)
        if d <= look and dx * ux + dy * uy >= d * cos_half:
            hard = True
            if d < best_d:
                best_d = d
                best_dx, best_dy = dx, dy
                best_kind = "point"

    for (ox, oy, orad) in obstacles.discs:
        dx = ox - px
        dy = oy - py
        d = math.hypot(dx, dy)
        eff = d - orad
        # A disc overlapping the robot center blocks regardless of bearing.
        if (eff <= look and dx * ux + dy * uy >= d * cos_half) or d <= orad:
            eff = max(eff, 0.0)
            if eff < best_d:
                best_d = eff
                best_dx, best_dy = dx, dy
                best_kind = "disc"

    rect = obstacles.arena_rect
    if rect is not None:
        inset = robot.radius
        probe_x = px + look * ux
        probe_y = py + look * uy
        cx = clamp(probe_x, rect[0] + inset, rect[2] - inset)
        cy = clamp(probe_y, rect[1] + inset, rect[3] - inset)
        if cx != probe_x or cy != probe_y:
            hard = True
            d = math.hypot(cx - px, cy - py)
            if d < best_d:
                best_d = d
                best_dx, best_dy = cx - px, cy - py
                best_kind = "boundary"

    if best_d == math.inf:
        return None
    return (best_d, math.atan2(best_dy, best_dx), best_kind, hard)


def cone_blocked(robot, obstacles: ObstacleSet, params: BehaviorParams) -> bool:
    return nearest_blocking(robot, obstacles, params) is not None


def _turn_to(heading: float, target_heading: float, max_turn_rate: float, dt: float) -> float:
    """Turn rate that moves heading toward target without overshoot."""
    err = wrap_angle(target_heading - heading)
    return clamp(err / dt, -max_turn_rate, max_turn_rate)


def _evade(robot, block, desired_bearing: float, params: BehaviorParams, dt: float) -> VelocityCommand:
    """Steer clear of a block while keeping as much way on as is safe.

    The clearing heading sits one cone half-angle plus margin off the
    obstacle bearing; the side (initially the one nearer the desired
    bearing) is latched in robot.avoid_side for the whole evasion episode
    and held through short clear gaps (see _evade_clear). Re-picking the
    side each tick against a heading-dependent nearest obstacle dithers the
    robot into a standstill; releasing the side at the first clear tick
    flips it on the next block and scissors the robot in place. While
    something immovable is in the cone the robot only moves once roughly
    aligned with the clearing heading, which slides it along walls; a
    neighbor robot is soft and gets steered around at speed. Sitting on top
    of a neighbor (overlap) means backing straight out of it."""
    d_blk, b_obs, kind, hard = block
    off = params.cone_half_angle + params.avoid_margin
    if robot.avoid_side is None:
        left_err = abs(wrap_angle(b_obs + off - desired_bearing))
        right_err = abs(wrap_angle(b_obs - off - desired_bearing))
        robot.avoid_side = 1 if left_err <= right_err else -1
    robot.avoid_hold = params.avoid_hold_ticks
    if kind == "disc" and d_blk <= 0.0:
        want = b_obs + math.pi
    else:
        want = b_obs + robot.avoid_side * off
    err = wrap_angle(want - robot.pose.heading)
    if hard and abs(err) >= params.cone_half_angle:
        speed = 0.0
    else:
        speed = robot.max_speed
    return VelocityCommand(speed, _turn_to(robot.pose.heading, want, robot.max_turn_rate, dt))


def _evade_clear(robot) -> None:
    """Tick down the evasion latch while the cone is clear; the side only
    releases after the hold expires so one clear tick between wall points
    does not flip it."""
    if robot.avoid_hold > 0:
        robot.avoid_hold -= 1
    else:
        robot.avoid_side = None


def random_walk_step(robot, obstacles: ObstacleSet, rng, params: BehaviorParams, dt: float) -> VelocityCommand:
    """Drive straight until the cone is blocked, then turn to a uniformly
    drawn heading; redraw if still blocked once aligned."""
    block = nearest_blocking(robot, obstacles, params)
    if block is None:
        robot.walk_heading = None
        robot.avoid_side = None
        robot.avoid_hold = 0
        return VelocityCommand(robot.max_speed, 0.0)
    if robot.walk_heading is None or abs(wrap_angle(robot.walk_heading - robot.pose.heading)) <= 1e-6:
        robot.walk_heading = rng.uniform(-math.pi, math.pi)
    return VelocityCommand(0.0, _turn_to(robot.pose.heading, robot.walk_heading, robot.max_turn_rate, dt))


def goto_target_step(robot, target: Vec2, obstacles: ObstacleSet, params: BehaviorParams, dt: float) -> VelocityCommand:
    """P-controller on bearing error; full speed once roughly aligned.

    Blocked movement is handled by _evade: slide along walls on a latched
    clearing side, steer around neighbor robots at speed. Directed robots
    converging on nearby drop points would otherwise freeze each other
    solid."""
    px, py = robot.pose.x, robot.pose.y
    d = math.hypot(target[0] - px, target[1] - py)
    if params.hold_at_target and d <= params.arrive_factor * robot.radius:
        return VelocityCommand(0.0, 0.0)
    target_bearing = math.atan2(target[1] - py, target[0] - px)

    block = nearest_blocking(robot, obstacles, params)
    if block is not None:
        return _evade(robot, block, target_bearing, params, dt)
    _evade_clear(robot)

    err = wrap_angle(target_bearing - robot.pose.heading)
    turn = clamp(params.goto_gain * err, -robot.max_turn_rate, robot.max_turn_rate)
    speed = robot.max_speed if abs(err) < math.pi / 4 else 0.0
    return VelocityCommand(speed, turn)


def formation_slots(bearings: dict[int, float]) -> dict[int, float]:
    """Assign ring slots 2*pi*k/N by bearing order (ties by robot id).

    Keeping the cyclic order of current bearings minimizes slot crossings.
    Slot angles are in [0, 2*pi)."""
    n = len(bearings)
    if n == 0:
        return {}
    order = sorted(bearings, key=lambda rid: (bearings[rid] % TWO_PI, rid))
    return {rid: TWO_PI * k / n for k, rid in enumerate(order)}


def formation_step(robot, center: Vec2, slot: float, params: FormationParams,
                   t: float, obstacles: ObstacleSet, bparams: BehaviorParams, dt: float) -> VelocityCommand:
    """Track the rotating reference point for this slot.

    Command = reference velocity feedforward plus proportional pull toward the
    reference; heading follows the command direction. Forward motion scales
    with the cosine of the heading error so the robot does not run sideways."""
    phase = slot + params.angular_speed * t
    rx = center[0] + params.ring_radius * math.cos(phase)
    ry = center[1] + params.ring_radius * math.sin(phase)
    vx = -params.ring_radius * params.angular_speed * math.sin(phase)
    vy = params.ring_radius * params.angular_speed * math.cos(phase)

    ux = vx + params.gain_radial * (rx - robot.pose.x)
    uy = vy + params.gain_radial * (ry - robot.pose.y)
    mag = math.hypot(ux, uy)
    if mag < 1e-12:
        return VelocityCommand(0.0, 0.0)
    want = math.atan2(uy, ux)

    block = nearest_blocking(robot, obstacles, bparams)
    if block is not None:
        return _evade(robot, block, want, bparams, dt)
    _evade_clear(robot)

    err = wrap_angle(want - robot.pose.heading)
    turn = clamp(params.gain_heading * err, -robot.max_turn_rate, robot.max_turn_rate)
    if abs(err) >= math.pi / 2:
        return VelocityCommand(0.0, turn)
    speed = clamp(mag * math.cos(err), 0.0, robot.max_speed)
    return VelocityCommand(speed, turn)


def expand_wall_points(a: Vec2, b: Vec2, avoid_radius: float) -> list[Vec2]:
    """Intermediate blocking points for a wall broadcast as two endpoints.

    Spacing s = min(avoid_radius, |b - a|), count = ceil(|b - a| / s) + 1,
    evenly spaced including both endpoints, so consecutive gaps never exceed
    avoid_radius and a short wall still yields its endpoints."""
    if avoid_radius <= 0.0:
        raise ValueError("avoid_radius must be positive")
    length = math.hypot(b[0] - a[0], b[1] - a[1])
    if length <= 0.0:
        raise ValueError("degenerate wall: endpoints coincide")
    s = min(avoid_radius, length)
    count = math.ceil(length / s) + 1
    xs = np.linspace(a[0], b[0], count)
    ys = np.linspace(a[1], b[1], count)
    return [(float(x), float(y)) for x, y in zip(xs, ys)]
