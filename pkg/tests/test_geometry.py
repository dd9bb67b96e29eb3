"""Planar geometry primitives."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from swarmgiant.geometry import (
    angle_to,
    clamp,
    clamp_to_rect,
    dist,
    finite_vec,
    point_segment_distance,
    points_segment_distance,
    segment_segment_distance,
    wrap_angle,
)

finite = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False)
point = st.tuples(finite, finite)


@given(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False))
def test_wrap_angle_range(theta):
    w = wrap_angle(theta)
    assert -math.pi <= w < math.pi


@given(st.floats(min_value=-100.0, max_value=100.0))
def test_wrap_angle_preserves_direction(theta):
    w = wrap_angle(theta)
    assert math.isclose(math.cos(w), math.cos(theta), abs_tol=1e-9)
    assert math.isclose(math.sin(w), math.sin(theta), abs_tol=1e-9)


def test_wrap_angle_pi_maps_to_minus_pi():
    assert wrap_angle(math.pi) == -math.pi
    assert wrap_angle(-math.pi) == -math.pi
    assert wrap_angle(0.0) == 0.0


def test_angle_to_cardinals():
    assert angle_to((0, 0), (1, 0)) == 0.0
    assert math.isclose(angle_to((0, 0), (0, 1)), math.pi / 2)
    assert math.isclose(angle_to((1, 1), (0, 1)), math.pi)


def test_dist_345():
    assert dist((0, 0), (3, 4)) == 5.0


def test_point_segment_distance_perpendicular_foot():
    assert point_segment_distance((0.5, 1.0), (0, 0), (1, 0)) == 1.0


def test_point_segment_distance_clamps_to_endpoints():
    assert point_segment_distance((-3, 4), (0, 0), (1, 0)) == 5.0
    assert point_segment_distance((4, -4), (0, 0), (1, 0)) == 5.0


def test_point_segment_distance_degenerate_segment():
    assert point_segment_distance((3, 4), (0, 0), (0, 0)) == 5.0


@given(point, point, point)
def test_point_segment_distance_bounded_by_endpoints(p, a, b):
    d = point_segment_distance(p, a, b)
    assert d <= dist(p, a) + 1e-9
    assert d <= dist(p, b) + 1e-9
    assert d >= 0.0


@given(st.lists(point, min_size=1, max_size=40), point, point)
def test_points_segment_distance_matches_scalar(pts, a, b):
    arr = np.asarray(pts, dtype=float)
    got = points_segment_distance(arr, a, b)
    want = [point_segment_distance(p, a, b) for p in pts]
    assert np.allclose(got, want, atol=1e-12)


def test_segment_segment_distance_crossing_is_zero():
    assert segment_segment_distance((0, -1), (0, 1), (-1, 0), (1, 0)) == 0.0


def test_segment_segment_distance_shared_endpoint_is_zero():
    assert segment_segment_distance((0, 0), (1, 0), (1, 0), (1, 1)) == 0.0


def test_segment_segment_distance_parallel_gap():
    assert math.isclose(segment_segment_distance((0, 0), (1, 0), (0, 0.3), (1, 0.3)), 0.3)


def test_segment_segment_distance_collinear_separated():
    assert math.isclose(segment_segment_distance((0, 0), (1, 0), (1.5, 0), (2, 0)), 0.5)


def test_segment_segment_distance_collinear_overlapping_is_zero():
    assert segment_segment_distance((0, 0), (1, 0), (0.5, 0), (2, 0)) == 0.0


def test_segment_segment_distance_degenerate_segments():
    # both segments collapsed to points
    assert segment_segment_distance((0, 0), (0, 0), (3, 4), (3, 4)) == 5.0


@given(point, point, point, point)
def test_segment_segment_distance_symmetric(p1, p2, q1, q2):
    d1 = segment_segment_distance(p1, p2, q1, q2)
    d2 = segment_segment_distance(q1, q2, p1, p2)
    assert math.isclose(d1, d2, abs_tol=1e-12)


@given(point, point, point, point)
def test_segment_segment_distance_lower_bounds_point_distances(p1, p2, q1, q2):
    # the segment gap can never exceed the distance between any endpoint pair
    d = segment_segment_distance(p1, p2, q1, q2)
    assert d <= min(dist(p1, q1), dist(p1, q2), dist(p2, q1), dist(p2, q2)) + 1e-9


def test_clamp():
    assert clamp(5.0, 0.0, 1.0) == 1.0
    assert clamp(-5.0, 0.0, 1.0) == 0.0
    assert clamp(0.5, 0.0, 1.0) == 0.5


def test_clamp_to_rect():
    assert clamp_to_rect((7.0, -2.0), 0.0, 0.0, 4.0, 3.0) == (4.0, 0.0)


def test_finite_vec_passthrough():
    assert finite_vec((1.5, -2.5)) == (1.5, -2.5)


@pytest.mark.parametrize("bad", [(float("nan"), 0.0), (0.0, float("inf")), (float("-inf"), 1.0)])
def test_finite_vec_rejects_non_finite(bad):
    with pytest.raises(ValueError):
        finite_vec(bad)
