"""Gesture recognizer: trace corpus, scale arithmetic, stream invariants."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swarmgiant.gestures import (
    AvatarState,
    GestureFsm,
    GestureParams,
    HandFrame,
    HandPose,
    apply_scale,
)

from gesture_corpus import (
    assert_events_match,
    assert_well_formed,
    build_corpus,
    hand,
    replay_trace,
)

CORPUS = build_corpus()


@pytest.mark.parametrize("trace", CORPUS, ids=[t.name for t in CORPUS])
def test_corpus_trace(trace, tmp_path):
    events, fsm = replay_trace(trace, tmp_path)
    assert_events_match(events, trace.expected, trace.name)
    assert_well_formed(events)
    if trace.check:
        trace.check(fsm)


def test_corpus_is_large_enough():
    assert len(CORPUS) >= 20


# -- apply_scale -----------------------------------------------------------

def test_apply_scale_identity():
    a = AvatarState()
    apply_scale(a, 1.0)
    assert a.world_scale == 1.0


def test_apply_scale_then_inverse_round_trips():
    a = AvatarState(world_scale=3.0)
    apply_scale(a, 2.0)
    apply_scale(a, 0.5)
    assert math.isclose(a.world_scale, 3.0, rel_tol=1e-12)


def test_apply_scale_clamps_both_ends():
    a = AvatarState(world_scale=80.0)
    apply_scale(a, 10.0)
    assert a.world_scale == 100.0
    b = AvatarState(world_scale=0.2)
    apply_scale(b, 0.01)
    assert b.world_scale == 0.1


@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan"), float("inf")])
def test_apply_scale_rejects_degenerate_factors(bad):
    a = AvatarState()
    with pytest.raises(ValueError):
        apply_scale(a, bad)
    assert a.world_scale == 1.0


# -- world transform -------------------------------------------------------

def test_pinch_position_maps_through_avatar_transform():
    # avatar offset and world_scale change where a sensor-space pinch lands
    fsm = GestureFsm(avatar=AvatarState(position=(10.0, 0.0, 5.0), world_scale=2.0))
    events = fsm.update(
        HandFrame(0.0, right=hand(thumb=(0.4, 0.0, 0.2), index=(0.4, 0.0, 0.2))), None)
    assert len(events) == 1
    x, y, z = events[0].position
    assert math.isclose(x, 10.0 + 0.4 / 2.0)
    assert math.isclose(y, 0.0)
    assert math.isclose(z, 5.0 + 0.2 / 2.0)


# -- stream well-formedness under arbitrary input ---------------------------

_coord = st.floats(min_value=-0.5, max_value=0.5, allow_nan=False, width=32)
_point = st.tuples(_coord, _coord, _coord)


@st.composite
def _pose(draw):
    p = draw(_point)
    return HandPose(
        palm_position=p,
        palm_normal=draw(st.sampled_from([(0.0, -1.0, 0.0), (0.0, 1.0, 0.0)])),
        thumb_tip=draw(_point),
        index_tip=draw(_point),
        grab_strength=draw(st.sampled_from([0.0, 0.5, 1.0])),
    )


@st.composite
def _frames(draw):
    n = draw(st.integers(min_value=1, max_value=30))
    out = []
    for i in range(n):
        out.append(HandFrame(
            timestamp=0.05 * i,
            left=draw(st.one_of(st.none(), _pose())),
            right=draw(st.one_of(st.none(), _pose())),
        ))
    # hands leave at the end so every announced gesture must close
    out.append(HandFrame(timestamp=0.05 * (n + 1)))
    return out


@given(_frames())
@settings(max_examples=60, deadline=None)
def test_event_stream_always_balanced(frames):
    fsm = GestureFsm()
    events = []
    for fr in frames:
        events.extend(fsm.update(fr, None))
    assert_well_formed(events)
    # after the empty tail frame nothing may still be latched
    for h in fsm.hands.values():
        assert not h.pinching and not h.announced and h.grasp_id is None
    assert not fsm.menu_shown


def test_params_defaults_are_consistent():
    p = GestureParams()
    assert p.pinch_release > p.pinch_engage  # hysteresis gap must be positive
    assert 0.0 < p.scale_min < 1.0 < p.scale_max
