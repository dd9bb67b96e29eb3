"""Event-to-command translation and the interaction counter."""

import pytest

from swarmgiant.gestures import (
    FlyVector,
    GraspEnd,
    GraspStart,
    MenuHidden,
    MenuShown,
    PinchEnd,
    PinchMove,
    PinchStart,
    Touch,
    TwoHandPinchScale,
)
from swarmgiant.interaction import (
    BTN_UNDO_WALL,
    BTN_WALL_MODE,
    CUBE_ID,
    DrawWall,
    PickCube,
    PickTarget,
    PlaceCube,
    PlaceTarget,
    SessionState,
    ToggleWallMode,
    UndoWall,
    apply_event,
    record_results,
)
from swarmgiant.world import ArenaSpec, WorldState


@pytest.fixture
def world():
    w = WorldState(ArenaSpec(3.0, 3.0), seed=1)
    w.spawn_robot((1.0, 1.0))
    w.spawn_robot((2.0, 1.0))
    return w


@pytest.fixture
def snap(world):
    return world.snapshot()


def drive(session, snap, *events):
    cmds = []
    for ev in events:
        cmds.extend(apply_event(session, ev, snap))
    return cmds


# -- grasp ---------------------------------------------------------------------

def test_grasp_robot_emits_pick_then_place(snap):
    s = SessionState()
    cmds = drive(s, snap,
                 GraspStart("target:1"),
                 GraspEnd("target:1", (2.5, 2.5, 0.0)))
    assert cmds == [PickTarget(1), PlaceTarget(1, (2.5, 2.5))]
    assert s.held is None


def test_grasp_unknown_robot_ignored(snap):
    s = SessionState()
    assert drive(s, snap, GraspStart("target:9")) == []
    assert s.held is None


def test_grasp_garbage_id_ignored(snap):
    s = SessionState()
    assert drive(s, snap, GraspStart("target:banana"), GraspStart("chair")) == []


def test_second_grasp_while_holding_is_dropped(snap):
    s = SessionState()
    cmds = drive(s, snap,
                 GraspStart("target:0"),
                 GraspStart("target:1"),
                 GraspEnd("target:0", (1.5, 1.5, 0.0)))
    assert cmds == [PickTarget(0), PlaceTarget(0, (1.5, 1.5))]


def test_grasp_end_for_something_not_held_ignored(snap):
    s = SessionState()
    assert drive(s, snap, GraspEnd("target:0", (1.0, 1.0, 0.0))) == []


def test_grasp_cube_round_trip(snap):
    s = SessionState()
    cmds = drive(s, snap,
                 GraspStart(CUBE_ID),
                 GraspEnd(CUBE_ID, (0.5, 0.5, 0.2)))
    assert cmds == [PickCube(), PlaceCube((0.5, 0.5))]


# -- wall drawing ----------------------------------------------------------------

def test_pinch_without_wall_mode_draws_nothing(snap):
    s = SessionState()
    cmds = drive(s, snap,
                 PinchStart("right", (0.5, 0.5, 0.0)),
                 PinchMove("right", (1.5, 0.5, 0.0)),
                 PinchEnd("right"))
    assert cmds == []


def test_wall_mode_pinch_stroke_emits_wall(snap):
    s = SessionState()
    cmds = drive(s, snap,
                 Touch(BTN_WALL_MODE),
                 PinchStart("right", (0.5, 0.5, 0.0)),
                 PinchMove("right", (1.0, 0.5, 0.7)),   # z is discarded
                 PinchMove("right", (1.5, 0.5, 0.0)),
                 PinchEnd("right"))
    assert cmds == [ToggleWallMode(), DrawWall((0.5, 0.5), (1.5, 0.5))]


def test_other_hand_cannot_finish_a_stroke(snap):
    s = SessionState()
    cmds = drive(s, snap,
                 Touch(BTN_WALL_MODE),
                 PinchStart("right", (0.5, 0.5, 0.0)),
                 PinchMove("left", (9.0, 9.0, 0.0)),
                 PinchEnd("left"),
                 PinchMove("right", (1.5, 0.5, 0.0)),
                 PinchEnd("right"))
    assert cmds == [ToggleWallMode(), DrawWall((0.5, 0.5), (1.5, 0.5))]


def test_degenerate_stroke_discarded_not_emitted(snap):
    s = SessionState()
    cmds = drive(s, snap,
                 Touch(BTN_WALL_MODE),
                 PinchStart("right", (0.5, 0.5, 0.0)),
                 PinchEnd("right"))
    assert cmds == [ToggleWallMode()]
    assert s.discarded_walls == 1


def test_leaving_wall_mode_cancels_pending_stroke(snap):
    s = SessionState()
    cmds = drive(s, snap,
                 Touch(BTN_WALL_MODE),
                 PinchStart("right", (0.5, 0.5, 0.0)),
                 Touch(BTN_WALL_MODE),
                 PinchEnd("right"))
    assert cmds == [ToggleWallMode(), ToggleWallMode()]
    assert s.pending_wall_start is None


def test_undo_button_emits_undo(snap):
    s = SessionState()
    assert drive(s, snap, Touch(BTN_UNDO_WALL)) == [UndoWall()]


def test_unknown_button_ignored(snap):
    s = SessionState()
    assert drive(s, snap, Touch("self_destruct")) == []


def test_perception_events_reach_no_commands(snap):
    s = SessionState()
    cmds = drive(s, snap,
                 TwoHandPinchScale(2.0), FlyVector((0.1, 0.0, 0.0)),
                 MenuShown(), MenuHidden())
    assert cmds == []
    assert s.interaction_count == 0


# -- counting ---------------------------------------------------------------------

def _run_commands(world, session, cmds):
    results = world.step(tuple(cmds))
    record_results(session, world.tick - 1, results)
    return results


def test_counter_counts_only_accepted_world_changes(world):
    s = SessionState()
    # 5 target placements and 2 walls: count 7
    cmds = [PlaceTarget(0, (1.0 + 0.1 * i, 2.0)) for i in range(5)]
    cmds += [DrawWall((0.5, 2.0), (1.0, 2.0)), DrawWall((1.5, 2.0), (2.0, 2.0))]
    _run_commands(world, s, cmds)
    assert s.interaction_count == 7


def test_toggles_and_picks_are_free(world):
    s = SessionState()
    _run_commands(world, s, [ToggleWallMode(), ToggleWallMode(),
                             ToggleWallMode(), ToggleWallMode(),
                             PickTarget(0), PickCube()])
    assert s.interaction_count == 0
    assert len(s.command_log) == 6


def test_rejected_commands_do_not_count(world):
    s = SessionState()
    _run_commands(world, s, [PlaceTarget(42, (1.0, 1.0)),      # unknown robot
                             DrawWall((0.5, 0.5), (0.5, 0.5))])  # degenerate
    assert s.interaction_count == 0
    assert [e.accepted for e in s.command_log] == [False, False]


def test_undo_counts_as_an_interaction(world):
    s = SessionState()
    _run_commands(world, s, [DrawWall((0.5, 2.0), (1.0, 2.0)), UndoWall()])
    assert s.interaction_count == 2


def test_log_carries_running_count(world):
    s = SessionState()
    _run_commands(world, s, [PlaceTarget(0, (1.2, 1.2)), PickTarget(0),
                             PlaceTarget(1, (1.4, 1.4))])
    assert [(e.accepted, e.interaction_count) for e in s.command_log] == [
        (True, 1), (True, 1), (True, 2)]
    assert [e.tick for e in s.command_log] == [0, 0, 0]
