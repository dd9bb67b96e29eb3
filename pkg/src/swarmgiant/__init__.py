"""Deterministic 2D swarm simulator with a gesture-driven operator layer."""

from .behaviors import (
    BehaviorParams,
    FormationParams,
    ObstacleSet,
    VelocityCommand,
    expand_wall_points,
    formation_slots,
)
from .gestures import AvatarState, GestureFsm, GestureParams, HandFrame, HandPose, Scene, SceneObject
from .interaction import SessionState, apply_event
from .mission import Metrics, MissionState, TaskRegion
from .operators import ScriptedOperator, experiment, run_strategy
from .runner import run_headless
from .scenario import BUILTIN_NAMES, Scenario, ScenarioError, builtin, load_scenario, resolve
from .world import ArenaSpec, Pose, RobotState, Snapshot, WorldState

__all__ = [
    "ArenaSpec", "AvatarState", "BehaviorParams", "BUILTIN_NAMES", "builtin",
    "expand_wall_points", "experiment", "formation_slots", "FormationParams",
    "GestureFsm", "GestureParams", "HandFrame", "HandPose", "load_scenario",
    "Metrics", "MissionState", "ObstacleSet", "Pose", "resolve", "RobotState",
    "run_headless", "run_strategy", "Scenario", "ScenarioError", "Scene",
    "SceneObject", "ScriptedOperator", "SessionState", "Snapshot",
    "TaskRegion", "VelocityCommand", "WorldState", "apply_event",
]
