"""Planar geometry helpers shared by the simulator core and the behaviors.

Positions are (x, y) tuples in meters unless a function explicitly takes
numpy arrays for the vectorized paths.
"""

from __future__ import annotations

import math

import numpy as np

Vec2 = tuple[float, float]

TWO_PI = 2.0 * math.pi


def wrap_angle(theta: float) -> float:
    """Wrap an angle to [-pi, pi)."""
    return (theta + math.pi) % TWO_PI - math.pi


def angle_to(src: Vec2, dst: Vec2) -> float:
    return math.atan2(dst[1] - src[1], dst[0] - src[0])


def dist(a: Vec2, b: Vec2) -> float:
    return math.hypot(b[0] - a[0], b[1] - a[1])


def point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> float:
    """Distance from point p to the closed segment ab."""
    ax, ay = a
    bx, by = b
    px, py = p
    dx, dy = bx - ax, by - ay
    seg2 = dx * dx + dy * dy
    if seg2 <= 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / seg2
    t = min(1.0, max(0.0, t))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def points_segment_distance(points: np.ndarray, a: Vec2, b: Vec2) -> np.ndarray:
    """Distances from an (N, 2) array of points to segment ab. Vectorized."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    av = np.array(a, dtype=float)
    d = np.array(b, dtype=float) - av
    seg2 = float(d @ d)
    if seg2 <= 0.0:
        return np.hypot(pts[:, 0] - av[0], pts[:, 1] - av[1])
    t = np.clip(((pts - av) @ d) / seg2, 0.0, 1.0)
    closest = av + t[:, None] * d
    return np.hypot(pts[:, 0] - closest[:, 0], pts[:, 1] - closest[:, 1])


def segment_segment_distance(p1: Vec2, p2: Vec2, q1: Vec2, q2: Vec2) -> float:
    """Minimum distance between closed segments p1p2 and q1q2.

    Zero when they intersect. Used for swept-path wall checks, so it must be
    exact rather than sampled.
    """
    if _segments_intersect(p1, p2, q1, q2):
        return 0.0
    return min(
        point_segment_distance(p1, q1, q2),
        point_segment_distance(p2, q1, q2),
        point_segment_distance(q1, p1, p2),
        point_segment_distance(q2, p1, p2),
    )


def _orient(a: Vec2, b: Vec2, c: Vec2) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _on_segment(a: Vec2, b: Vec2, p: Vec2) -> bool:
    return (
        min(a[0], b[0]) - 1e-15 <= p[0] <= max(a[0], b[0]) + 1e-15
        and min(a[1], b[1]) - 1e-15 <= p[1] <= max(a[1], b[1]) + 1e-15
    )


def _segments_intersect(p1: Vec2, p2: Vec2, q1: Vec2, q2: Vec2) -> bool:
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0:
        return True
    # Collinear / endpoint-touching cases.
    if d1 == 0 and _on_segment(q1, q2, p1):
        return True
    if d2 == 0 and _on_segment(q1, q2, p2):
        return True
    if d3 == 0 and _on_segment(p1, p2, q1):
        return True
    if d4 == 0 and _on_segment(p1, p2, q2):
        return True
    return False


def clamp(x: float, lo: float, hi: float) -> float:
    return lo if x < lo else hi if x > hi else x


def clamp_to_rect(p: Vec2, xmin: float, ymin: float, xmax: float, ymax: float) -> Vec2:
    return (clamp(p[0], xmin, xmax), clamp(p[1], ymin, ymax))


def finite_vec(p) -> Vec2:
    """Coerce to a finite (x, y) tuple or raise ValueError."""
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"non-finite coordinate: {p!r}")
    return (x, y)
