"""Table scene and the pick-and-place task state machine.

The scene is a table with a cubic block and a circular target area; the
task advances through a fixed phase sequence driven purely by gripper
state and end-effector geometry. Grasping is kinematic attachment: while
grasped the block follows the end effector at the rigid offset captured
when the grasp closed.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import quat
from .errors import ConfigError
from .kinematics import Pose

CLEARANCE_M = 0.10            # pre-grasp / retreat height above the block top
TRANSPORT_LIFT_M = 0.25       # transport height above the table
APPROACH_TOL_M = 0.02
GRASP_TOL_M = 0.015
PLACE_SETTLE_TOL_M = 0.01     # how close to the table the block bottom must be to release
GRASP_DWELL_S = 0.5
RELEASE_DWELL_S = 0.5
KEEP_OUT_RADIUS_M = 0.12

# tool-down orientation used for all grasp-side waypoints
ORI_DOWN = quat.from_axis_angle(np.array([0.0, 1.0, 0.0]), np.pi)


class Phase(Enum):
    APPROACH_PICK = "ApproachPick"
    DESCEND = "Descend"
    GRASP = "Grasp"
    LIFT = "Lift"
    TRANSPORT = "Transport"
    LOWER = "Lower"
    RELEASE = "Release"
    RETREAT = "Retreat"
    DONE = "Done"


PHASE_ORDER = tuple(Phase)
GRASPED_PHASES = frozenset({Phase.GRASP, Phase.LIFT, Phase.TRANSPORT, Phase.LOWER})


@dataclass(frozen=True)
class SceneConfig:
    """Static scene geometry plus the arm's mounting and start state."""

    table_height: float
    table_bounds: tuple            # (xmin, xmax, ymin, ymax), meters
    block_center: np.ndarray       # initial block center, world frame
    block_side: float
    target_center: np.ndarray      # (x, y, table_height)
    target_radius: float
    base: Pose = field(default_factory=lambda: Pose.of((0.0, 0.0, 0.0)))
    home_config: np.ndarray = field(default_factory=lambda: np.zeros(7))
    keep_out_radius: float = KEEP_OUT_RADIUS_M

    @classmethod
    def default(cls):
        """Benchmark scene: block front-right, target front-left.

        The home configuration keeps q2+q4+q6 = pi so the tool points
        straight down already at start; its end effector sits near
        (0.35, 0, 0.49), comfortably inside the workspace.

        Both key points stay within radius 0.45 of the base. With the
        tool pointing down the wrist pivot must reach the grasp height
        plus the last link, which bounds the horizontal radius at table
        level to about 0.50 for the default arm; staying under 0.45
        keeps the elbow bent and the arm well-conditioned throughout.
        """
        return cls(
            table_height=0.0,
            table_bounds=(-0.80, 0.80, -0.80, 0.80),
            block_center=np.array([0.40, -0.20, 0.02]),
            block_side=0.04,
            target_center=np.array([0.36, 0.24, 0.0]),
            target_radius=0.02,
            home_config=np.array([0.0, 0.4, 0.0, 1.5, 0.0, np.pi - 1.9, 0.0]),
        ).validate()

    def validate(self):
        xmin, xmax, ymin, ymax = self.table_bounds
        if not (xmin < xmax and ymin < ymax):
            raise ConfigError("table bounds must be a non-empty rectangle")
        if self.block_side <= 0 or self.target_radius <= 0:
            raise ConfigError("block side and target radius must be positive")
        bottom = self.block_center[2] - self.block_side / 2.0
        if abs(bottom - self.table_height) > 1e-9:
            raise ConfigError("block must initially rest on the table surface")
        tx, ty = self.target_center[0], self.target_center[1]
        if not (xmin + self.target_radius <= tx <= xmax - self.target_radius
                and ymin + self.target_radius <= ty <= ymax - self.target_radius):
            raise ConfigError("target circle must lie within the table bounds")
        horiz = np.hypot(self.block_center[0] - tx, self.block_center[1] - ty)
        if horiz <= self.block_side / 2.0 * np.sqrt(2.0) + self.target_radius:
            raise ConfigError("block and target must initially be disjoint")
        return self


@dataclass(frozen=True)
class KeyPoints:
    """Cartesian key points shared by the planner and the task machine."""

    pregrasp: np.ndarray
    grasp: np.ndarray
    lift_top: np.ndarray
    above_target: np.ndarray
    place: np.ndarray
    retreat: np.ndarray
    transport_height: float


def key_points(scene):
    bx, by, bz = scene.block_center
    block_top = scene.table_height + scene.block_side
    grasp_z = bz                                  # grasp around the block center
    tx, ty = scene.target_center[0], scene.target_center[1]
    th = scene.table_height + TRANSPORT_LIFT_M
    return KeyPoints(
        pregrasp=np.array([bx, by, block_top + CLEARANCE_M]),
        grasp=np.array([bx, by, grasp_z]),
        lift_top=np.array([bx, by, th]),
        above_target=np.array([tx, ty, th]),
        place=np.array([tx, ty, grasp_z]),
        retreat=np.array([tx, ty, block_top + CLEARANCE_M]),
        transport_height=th,
    )


@dataclass(frozen=True)
class TaskState:
    phase: Phase
    grasped: bool
    block_pose: Pose
    grasp_offset_pos: np.ndarray   # block position in the EE frame at grasp time
    grasp_offset_ori: np.ndarray   # block orientation relative to the EE frame

    @staticmethod
    def initial(scene):
        return TaskState(
            phase=Phase.APPROACH_PICK,
            grasped=False,
            block_pose=Pose.of(scene.block_center),
            grasp_offset_pos=np.zeros(3),
            grasp_offset_ori=quat.IDENTITY.copy(),
        )


def _attached_block(ee, state):
    pos = ee.position + quat.rotate(ee.orientation, state.grasp_offset_pos)
    ori = quat.multiply(ee.orientation, state.grasp_offset_ori)
    return Pose(pos, ori)


def _horiz(a, b):
    return float(np.hypot(a[0] - b[0], a[1] - b[1]))


def step_task(state, scene, ee, gripper_closed):
    """Advance the task by at most one phase; returns (state, events).

    Invalid geometry never raises; the phase simply does not advance.
    """
    points = key_points(scene)
    block = _attached_block(ee, state) if state.grasped else state.block_pose
    phase = state.phase
    grasped = state.grasped
    off_p, off_o = state.grasp_offset_pos, state.grasp_offset_ori
    events = []

    if phase is Phase.APPROACH_PICK:
        if np.linalg.norm(ee.position - points.pregrasp) <= APPROACH_TOL_M:
            phase = Phase.DESCEND
            events.append("reached_pregrasp")
    elif phase is Phase.DESCEND:
        if gripper_closed and np.linalg.norm(ee.position - points.grasp) <= GRASP_TOL_M:
            phase = Phase.GRASP
            grasped = True
            inv = quat.conjugate(ee.orientation)
            off_p = quat.rotate(inv, block.position - ee.position)
            off_o = quat.multiply(inv, block.orientation)
            events.append("grasped")
    elif phase is Phase.GRASP:
        if grasped and ee.position[2] >= points.grasp[2] + 0.02:
            phase = Phase.LIFT
            events.append("lifting")
    elif phase is Phase.LIFT:
        if ee.position[2] >= points.transport_height - 0.02:
            phase = Phase.TRANSPORT
            events.append("transporting")
    elif phase is Phase.TRANSPORT:
        if _horiz(ee.position, points.above_target) <= APPROACH_TOL_M:
            phase = Phase.LOWER
            events.append("lowering")
    elif phase is Phase.LOWER:
        bottom = block.position[2] - scene.block_side / 2.0
        if not gripper_closed and bottom <= scene.table_height + PLACE_SETTLE_TOL_M:
            phase = Phase.RELEASE
            grasped = False
            # the block settles onto the table where it was let go
            rest = block.position.copy()
            rest[2] = scene.table_height + scene.block_side / 2.0
            block = Pose(rest, block.orientation)
            events.append("released")
    elif phase is Phase.RELEASE:
        if not gripper_closed and _horiz(block.position, scene.target_center) <= scene.target_radius:
            phase = Phase.RETREAT
            events.append("placed")
    elif phase is Phase.RETREAT:
        if np.linalg.norm(ee.position - points.retreat) <= APPROACH_TOL_M:
            phase = Phase.DONE
            events.append("done")

    new_state = TaskState(phase, grasped, block, off_p, off_o)
    return new_state, events
