"""Seven-DoF serial arm: forward kinematics, Jacobian, damped-least-squares IK.

The arm is a chain of revolute joints. Joint i contributes the rigid
transform Trans(offset_i) * Rot(axis_i, q_i), with offset and axis given
in the parent frame; the end effector sits at the origin of the last
frame. The default model alternates yaw/pitch axes and is fully extended
along world +Z at the zero configuration.
"""

from dataclasses import dataclass, field

import numpy as np

from . import quat
from .errors import LimitViolation, NotConverged, Unreachable

N_JOINTS = 7

DEFAULT_AXES = ("z", "y", "z", "y", "z", "y", "z")
DEFAULT_OFFSETS_M = (0.175, 0.175, 0.160, 0.160, 0.120, 0.120, 0.075)
# base yaw gets the full half-turn; the remaining joints stay clear of wrap-around
DEFAULT_LIMITS_RAD = (np.pi, 2.6, 2.6, 2.6, 2.6, 2.6, 2.6)
DEFAULT_IK_DAMPING = 0.05

_AXIS_VECTORS = {
    "x": np.array([1.0, 0.0, 0.0]),
    "y": np.array([0.0, 1.0, 0.0]),
    "z": np.array([0.0, 0.0, 1.0]),
}


@dataclass(frozen=True)
class Pose:
    """Position (m) and unit-quaternion orientation in the world frame."""

    position: np.ndarray
    orientation: np.ndarray

    @staticmethod
    def of(position, orientation=None):
        p = np.asarray(position, dtype=float)
        if orientation is None:
            o = quat.IDENTITY.copy()
        else:
            o = quat.normalize(orientation)
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(o))):
            raise ValueError("pose components must be finite")
        return Pose(p, o)

    def transform_point(self, v):
        return self.position + quat.rotate(self.orientation, v)


@dataclass(frozen=True)
class Twist:
    """Linear (m/s) and angular (rad/s) end-effector velocity."""

    linear: np.ndarray
    angular: np.ndarray

    @staticmethod
    def of(linear=(0.0, 0.0, 0.0), angular=(0.0, 0.0, 0.0)):
        return Twist(np.asarray(linear, dtype=float), np.asarray(angular, dtype=float))

    @staticmethod
    def zero():
        return Twist(np.zeros(3), np.zeros(3))

    def clamped(self, v_max, omega_max):
        """Scale each part down so its magnitude respects the limit."""
        lin, ang = self.linear, self.angular
        ln = np.linalg.norm(lin)
        if ln > v_max:
            lin = lin * (v_max / ln)
        an = np.linalg.norm(ang)
        if an > omega_max:
            ang = ang * (omega_max / an)
        return Twist(lin, ang)

    def as_vector(self):
        return np.concatenate([self.linear, self.angular])


@dataclass(frozen=True)
class MotionLimits:
    """Cartesian speed and acceleration bounds shared by control and planning."""

    v_max: float = 0.15
    omega_max: float = 0.8
    a_max: float = 0.5


@dataclass(frozen=True)
class Joint:
    axis: np.ndarray          # unit rotation axis in the parent frame
    offset: np.ndarray        # fixed link offset in the parent frame, meters
    lower: float              # joint limit, radians
    upper: float


@dataclass(frozen=True)
class ArmModel:
    joints: tuple
    base: Pose = field(default_factory=lambda: Pose.of((0.0, 0.0, 0.0)))
    ik_damping: float = DEFAULT_IK_DAMPING

    @staticmethod
    def default(base=None, ik_damping=DEFAULT_IK_DAMPING):
        joints = tuple(
            Joint(
                axis=_AXIS_VECTORS[ax].copy(),
                offset=np.array([0.0, 0.0, off]),
                lower=-lim,
                upper=lim,
            )
            for ax, off, lim in zip(DEFAULT_AXES, DEFAULT_OFFSETS_M, DEFAULT_LIMITS_RAD)
        )
        return ArmModel(joints=joints, base=base or Pose.of((0.0, 0.0, 0.0)),
                        ik_damping=ik_damping)

    @property
    def total_reach(self):
        return float(sum(np.linalg.norm(j.offset) for j in self.joints))

    def clamp(self, q):
        lo = np.array([j.lower for j in self.joints])
        hi = np.array([j.upper for j in self.joints])
        return np.clip(q, lo, hi)

    def assert_within_limits(self, q):
        q = np.asarray(q, dtype=float)
        if q.shape != (len(self.joints),):
            raise LimitViolation(f"expected {len(self.joints)} joint angles, got shape {q.shape}")
        if not np.all(np.isfinite(q)):
            raise LimitViolation("joint angles must be finite")
        for i, (angle, joint) in enumerate(zip(q, self.joints)):
            if angle < joint.lower or angle > joint.upper:
                raise LimitViolation(
                    f"joint {i + 1} angle {angle:.4f} outside [{joint.lower}, {joint.upper}]"
                )
        return q


def _chain_frames(model, q):
    """World position and orientation of every joint frame plus the EE.

    Returns (origins, orientations): origins[j] is the rotation center of
    joint j, orientations[j] the world orientation of joint j's parent
    chain including j's own rotation; the last entries describe the EE.
    """
    pos = model.base.position.copy()
    ori = model.base.orientation.copy()
    origins = np.empty((len(model.joints), 3))
    rots = np.empty((len(model.joints), 4))
    for j, (joint, angle) in enumerate(zip(model.joints, q)):
        pos = pos + quat.rotate(ori, joint.offset)
        origins[j] = pos
        ori = quat.multiply(ori, quat.from_axis_angle(joint.axis, angle))
        rots[j] = ori
    return origins, rots, pos, ori


def forward_kinematics(model, q):
    """End-effector pose in the world frame for configuration q."""
    q = model.assert_within_limits(q)
    _, _, pos, ori = _chain_frames(model, q)
    return Pose(pos, quat.normalize(ori))


def _jacobian_from_frames(model, origins, rots, p_ee):
    J = np.empty((6, len(model.joints)))
    parent = model.base.orientation
    for j, joint in enumerate(model.joints):
        axis_world = quat.rotate(parent, joint.axis)
        J[:3, j] = np.cross(axis_world, p_ee - origins[j])
        J[3:, j] = axis_world
        parent = rots[j]
    return J


def jacobian(model, q):
    """6x7 spatial Jacobian: rows linear x,y,z then angular x,y,z."""
    q = model.assert_within_limits(q)
    origins, rots, p_ee, _ = _chain_frames(model, q)
    return _jacobian_from_frames(model, origins, rots, p_ee)


@dataclass(frozen=True)
class IKStep:
    q: np.ndarray
    saturated: bool           # true when joint clamping altered the step


def damped_pinv_velocity(J, twist_vec, damping):
    """Joint rates solving the damped normal equations J^T (JJ^T + l^2 I)^-1 t."""
    JJt = J @ J.T
    A = JJt + (damping * damping) * np.eye(6)
    y = np.linalg.solve(A, twist_vec)
    return J.T @ y


def ik_velocity_step(model, q, desired, dt):
    """One damped-least-squares velocity step; joint limits are clamped."""
    if not (0.0 < dt <= 0.1):
        raise ValueError(f"dt must lie in (0, 0.1], got {dt}")
    q = model.assert_within_limits(q)
    t = desired.as_vector()
    if not np.any(t):
        return IKStep(q.copy(), False)
    J = jacobian(model, q)
    qdot = damped_pinv_velocity(J, t, model.ik_damping)
    q_raw = q + dt * qdot
    q_new = model.clamp(q_raw)
    return IKStep(q_new, bool(np.any(q_new != q_raw)))


def manipulability(J):
    """Yoshikawa measure sqrt(det(JJ^T)); near zero at singularities."""
    return float(np.sqrt(max(np.linalg.det(J @ J.T), 0.0)))


@dataclass(frozen=True)
class IKResult:
    q: np.ndarray
    position_error: float
    orientation_error: float
    iterations: int
    converged: bool


POS_TOL = 1e-4
ORI_TOL = 1e-3
MAX_ITERS = 500


def pose_error(current, target):
    """Position delta and rotation vector carrying current onto target."""
    dp = target.position - current.position
    dq = quat.multiply(target.orientation, quat.conjugate(current.orientation))
    return dp, quat.to_rotvec(dq)


def solve_ik(model, target, seed, pos_tol=POS_TOL, ori_tol=ORI_TOL, max_iters=MAX_ITERS):
    """Iterate velocity steps from seed until the target pose is reached.

    Raises Unreachable when the target position lies outside the reach
    sphere, NotConverged (carrying the best-effort IKResult) after
    max_iters. Deterministic: same model/target/seed give identical output.
    """
    seed = model.assert_within_limits(seed)
    if np.linalg.norm(target.position - model.base.position) > model.total_reach:
        raise Unreachable(
            f"target at {np.linalg.norm(target.position - model.base.position):.3f} m "
            f"exceeds reach {model.total_reach:.3f} m"
        )
    q = seed.copy()
    best = None
    step_dt = 0.1              # upper end of the velocity-step interval
    gain = 6.0                 # error-to-twist feedback gain, 1/s
    for it in range(max_iters + 1):
        origins, rots, p_ee, ori = _chain_frames(model, q)
        pose = Pose(p_ee, quat.normalize(ori))
        dp, drot = pose_error(pose, target)
        ep = float(np.linalg.norm(dp))
        eo = float(np.linalg.norm(drot))
        if best is None or (ep, eo) < (best.position_error, best.orientation_error):
            best = IKResult(q.copy(), ep, eo, it, False)
        if ep < pos_tol and eo < ori_tol:
            return IKResult(q.copy(), ep, eo, it, True)
        if it == max_iters:
            break
        J = _jacobian_from_frames(model, origins, rots, p_ee)
        qdot = damped_pinv_velocity(J, np.concatenate([gain * dp, gain * drot]),
                                    model.ik_damping)
        q = model.clamp(q + step_dt * qdot)
    raise NotConverged(
        f"no convergence after {max_iters} iterations "
        f"(best {best.position_error:.2e} m / {best.orientation_error:.2e} rad)",
        result=best,
    )
