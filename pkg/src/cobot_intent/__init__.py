"""Simulated 7-DoF cobot pick-and-place with motion-intent feedback.

The package couples a deterministic fixed-timestep arm simulation with
two feedback channels that communicate the robot's planned motion: arrow
glyphs at the end effector (immediate and upcoming direction) and a
six-actuator vibrotactile glove mapping. Sessions run headless, over a
socket, or from recorded logs, and always reproduce bit-identically for
the same configuration and inputs.
"""

from .config import (
    ExperimentConfig,
    default_config,
    load_config,
    session_id,
    validate_config,
)
from .control import (
    ControlMapping,
    ControlState,
    InputSample,
    apply_input,
    cardinal_mappings,
    recommend_mappings,
    scripted_user,
    switch_mode,
)
from .errors import (
    CobotError,
    ConfigError,
    DegeneratePlan,
    Infeasible,
    LimitViolation,
    NotConverged,
    OutOfRange,
    ParseError,
    Unreachable,
    VersionError,
)
from .intent import (
    ActuatorFrame,
    ArrowGlyph,
    GloveAlignment,
    arrow_glyphs,
    change_gain,
    direction_to_actuators,
    lookahead_directions,
)
from .kinematics import (
    ArmModel,
    IKResult,
    MotionLimits,
    Pose,
    Twist,
    forward_kinematics,
    ik_velocity_step,
    jacobian,
    manipulability,
    solve_ik,
)
from .metrics import MetricsReport, compute_metrics, fold_metrics
from .planning import TrajectoryPlan, plan_pick_place, sample_plan
from .scene import Phase, SceneConfig, TaskState, key_points, step_task
from .server import DEFAULT_PORT, SessionServer
from .session import (
    LogDriver,
    NullDriver,
    QueueDriver,
    ScriptedDriver,
    SessionResult,
    read_log,
    replay_log,
    run_session,
    save_log,
    scripted_driver,
)

__version__ = "0.1.0"

__all__ = [
    "ActuatorFrame",
    "ArmModel",
    "ArrowGlyph",
    "CobotError",
    "ConfigError",
    "ControlMapping",
    "ControlState",
    "DEFAULT_PORT",
    "DegeneratePlan",
    "ExperimentConfig",
    "GloveAlignment",
    "IKResult",
    "Infeasible",
    "LimitViolation",
    "InputSample",
    "LogDriver",
    "MetricsReport",
    "MotionLimits",
    "NotConverged",
    "NullDriver",
    "OutOfRange",
    "ParseError",
    "Phase",
    "Pose",
    "QueueDriver",
    "SceneConfig",
    "ScriptedDriver",
    "SessionResult",
    "SessionServer",
    "TaskState",
    "TrajectoryPlan",
    "Twist",
    "Unreachable",
    "VersionError",
    "apply_input",
    "arrow_glyphs",
    "cardinal_mappings",
    "change_gain",
    "compute_metrics",
    "default_config",
    "direction_to_actuators",
    "fold_metrics",
    "forward_kinematics",
    "ik_velocity_step",
    "jacobian",
    "key_points",
    "load_config",
    "lookahead_directions",
    "manipulability",
    "plan_pick_place",
    "read_log",
    "recommend_mappings",
    "replay_log",
    "run_session",
    "sample_plan",
    "save_log",
    "scripted_driver",
    "scripted_user",
    "session_id",
    "solve_ik",
    "step_task",
    "switch_mode",
    "validate_config",
]
