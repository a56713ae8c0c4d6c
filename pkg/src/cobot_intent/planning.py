"""Cartesian pick-and-place trajectory: waypoints plus trapezoidal timing.

Each straight segment is time-parameterized with a trapezoidal speed
profile capped at (v_max, a_max); short segments degenerate to the
triangular profile. Grasp and release pauses are zero-length dwell
segments with fixed duration.
"""

import bisect
from dataclasses import dataclass

import numpy as np

from . import quat
from .errors import Infeasible, OutOfRange, Unreachable
from .kinematics import Pose, forward_kinematics
from .scene import (
    GRASP_DWELL_S,
    ORI_DOWN,
    Phase,
    RELEASE_DWELL_S,
    key_points,
)

MAX_SEGMENT_M = 1.0           # sanity cap on a single straight segment
MIN_SEGMENT_S = 0.01          # floor so waypoint times stay strictly increasing


@dataclass(frozen=True)
class TrapezoidProfile:
    """Distance-vs-time law for one straight segment."""

    length: float
    v: float
    a: float

    @property
    def duration(self):
        if self.length <= 0.0:
            return 0.0
        if self.length >= self.v * self.v / self.a:
            return self.length / self.v + self.v / self.a
        return 2.0 * np.sqrt(self.length / self.a)

    def distance(self, t):
        """Distance traveled at time t in [0, duration]."""
        T = self.duration
        if t <= 0.0:
            return 0.0
        if t >= T:
            return self.length
        if self.length >= self.v * self.v / self.a:
            t_acc = self.v / self.a
            if t < t_acc:
                return 0.5 * self.a * t * t
            if t <= T - t_acc:
                return self.v * t - self.v * self.v / (2.0 * self.a)
            tr = T - t
            return self.length - 0.5 * self.a * tr * tr
        # triangular: accelerate to the midpoint, then mirror
        half = 0.5 * T
        if t <= half:
            return 0.5 * self.a * t * t
        tr = T - t
        return self.length - 0.5 * self.a * tr * tr


@dataclass(frozen=True)
class Waypoint:
    time: float
    pose: Pose
    phase: Phase


@dataclass(frozen=True)
class Segment:
    t0: float
    t1: float
    start: Pose
    end: Pose
    profile: TrapezoidProfile
    phase: Phase

    @property
    def length(self):
        return float(np.linalg.norm(self.end.position - self.start.position))


@dataclass(frozen=True)
class TrajectoryPlan:
    waypoints: tuple
    segments: tuple

    @property
    def duration(self):
        return self.waypoints[-1].time

    def phase_at(self, t):
        return self._segment_at(t).phase

    def _segment_at(self, t):
        if t < 0.0 or t > self.duration:
            raise OutOfRange(f"t={t} outside [0, {self.duration}]")
        times = [s.t0 for s in self.segments]
        i = bisect.bisect_right(times, t) - 1
        return self.segments[max(i, 0)]

    def segment_end_after(self, t):
        """End time of the segment containing t."""
        return self._segment_at(t).t1


def sample_plan(plan, t):
    """Pose on the plan at time t; piecewise trapezoidal in position,
    spherically interpolated in orientation."""
    seg = plan._segment_at(t)
    L = seg.length
    if L <= 1e-12:
        u = 0.0 if seg.t1 == seg.t0 else (t - seg.t0) / (seg.t1 - seg.t0)
        pos = seg.start.position
    else:
        s = seg.profile.distance(t - seg.t0)
        u = s / L
        pos = seg.start.position + u * (seg.end.position - seg.start.position)
    ori = quat.slerp(seg.start.orientation, seg.end.orientation, u)
    return Pose(np.asarray(pos, dtype=float).copy(), ori)


def _build_plan(legs):
    """legs: list of (pose, phase, dwell_seconds_or_None, profile_or_None)."""
    waypoints = [Waypoint(0.0, legs[0][0], legs[0][1])]
    segments = []
    t = 0.0
    prev_pose = legs[0][0]
    for pose, phase, dwell, profile in legs[1:]:
        if dwell is not None:
            duration = dwell
        else:
            duration = max(profile.duration, MIN_SEGMENT_S)
        t1 = t + duration
        segments.append(Segment(t, t1, prev_pose, pose, profile
                                or TrapezoidProfile(0.0, 1.0, 1.0), phase))
        waypoints.append(Waypoint(t1, pose, phase))
        t = t1
        prev_pose = pose
    return TrajectoryPlan(tuple(waypoints), tuple(segments))


def plan_pick_place(scene, model, limits):
    """Reference trajectory for one pick-and-place run of the given scene.

    Raises Unreachable when the grasp or place points (including transport
    height) fall outside the arm's reach sphere, Infeasible when the
    target overlaps the base keep-out disc.
    """
    points = key_points(scene)
    base = model.base.position
    for p in (points.pregrasp, points.grasp, points.lift_top,
              points.above_target, points.place, points.retreat):
        if np.linalg.norm(p - base) > model.total_reach:
            raise Unreachable(
                f"waypoint {np.round(p, 3)} outside reach {model.total_reach:.3f} m"
            )
    if (np.hypot(scene.target_center[0] - base[0], scene.target_center[1] - base[1])
            <= scene.keep_out_radius + scene.target_radius):
        raise Infeasible("target area overlaps the arm base keep-out disc")

    start = forward_kinematics(model, scene.home_config)

    def pose(p):
        return Pose(np.asarray(p, dtype=float), ORI_DOWN.copy())

    def profile(a, b):
        return TrapezoidProfile(float(np.linalg.norm(np.asarray(b) - np.asarray(a))),
                                limits.v_max, limits.a_max)

    grasp_pose = pose(points.grasp)
    place_pose = pose(points.place)
    legs = [
        (start, Phase.APPROACH_PICK, None, None),
        (pose(points.pregrasp), Phase.APPROACH_PICK, None,
         profile(start.position, points.pregrasp)),
        (grasp_pose, Phase.DESCEND, None, profile(points.pregrasp, points.grasp)),
        (grasp_pose, Phase.GRASP, GRASP_DWELL_S, None),
        (pose(points.lift_top), Phase.LIFT, None, profile(points.grasp, points.lift_top)),
        (pose(points.above_target), Phase.TRANSPORT, None,
         profile(points.lift_top, points.above_target)),
        (place_pose, Phase.LOWER, None, profile(points.above_target, points.place)),
        (place_pose, Phase.RELEASE, RELEASE_DWELL_S, None),
        (pose(points.retreat), Phase.RETREAT, None, profile(points.place, points.retreat)),
    ]
    plan = _build_plan(legs)
    for seg in plan.segments:
        if seg.length > MAX_SEGMENT_M:
            raise Infeasible(f"segment of {seg.length:.2f} m exceeds {MAX_SEGMENT_M} m")
    return plan
