"""Control schemes: cardinal mode-switch mappings, recommender-driven
adaptive mappings, and a deterministic scripted user for benchmarks.

A mapping assigns one basis twist to each of the two input axes. Basis
twists are unit norm under the combined metric ||v||^2 + (L*||w||)^2
with characteristic length L = 0.2 m, so a full-scale axis always
commands the same effective speed whether it drives translation or
rotation.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import DegeneratePlan
from .intent import lookahead_directions
from .kinematics import MotionLimits, Twist, ik_velocity_step
from .planning import sample_plan
from .scene import GRASPED_PHASES

CHAR_LENGTH_M = 0.2           # angular-to-linear weight in the twist norm
SWITCH_THRESHOLD = 0.25       # scripted user switches below this fraction
AXIS_GRID = (-1.0, -0.5, 0.0, 0.5, 1.0)
CARROT_AHEAD_S = 0.5          # how far ahead of progress the carrot sits
IDLE_TOL_M = 0.004            # close enough to the carrot to stop
GRIP_TOL_M = 0.005            # close enough to toggle the gripper

_V_MAX = MotionLimits().v_max
_W_UNIT = 1.0 / CHAR_LENGTH_M  # pure angular basis magnitude (unit norm)


@dataclass(frozen=True)
class InputSample:
    """One sample from the 2-axis input device."""

    axis1: float
    axis2: float
    mode_switch_pressed: bool = False
    grip_toggle_pressed: bool = False
    timestamp_ms: int = 0


@dataclass(frozen=True)
class ControlMapping:
    basis1: Twist
    basis2: Twist
    label: str
    gripper_on_axis1: bool = False


@dataclass(frozen=True)
class ControlState:
    scheme: str                # "cardinal" or "adaptive"
    mappings: tuple
    active_index: int = 0
    switch_count: int = 0

    @property
    def active(self):
        return self.mappings[self.active_index]


def _linear(x, y, z):
    return Twist(np.array([x, y, z], dtype=float), np.zeros(3))


def _angular(x, y, z):
    return Twist(np.zeros(3), _W_UNIT * np.array([x, y, z], dtype=float))


def cardinal_mappings():
    """The four fixed axis-aligned mappings, in switch order."""
    return (
        ControlMapping(_linear(1, 0, 0), _linear(0, 1, 0), "translate-xy"),
        ControlMapping(_linear(0, 0, 1), _angular(0, 0, 1), "z-yaw"),
        ControlMapping(_angular(0, 1, 0), _angular(1, 0, 0), "pitch-roll"),
        ControlMapping(_linear(0, 0, 0), _linear(0, 0, 0), "gripper",
                       gripper_on_axis1=True),
    )


def mapping_norm(twist):
    """Combined twist norm with angular velocity scaled by CHAR_LENGTH_M."""
    return float(np.sqrt(np.dot(twist.linear, twist.linear)
                         + CHAR_LENGTH_M ** 2 * np.dot(twist.angular, twist.angular)))


def recommend_mappings(ee, task, scene, plan, t):
    """Ranked mappings: one path-following suggestion, then the cardinals.

    The top mapping puts the planned path direction on axis 1 and the
    orthogonalized upcoming-curvature direction on axis 2 (default +Z,
    or +X when the path is vertical). task and scene are part of the
    recommender interface for richer strategies; the geometric default
    needs only the plan.
    """
    duration = plan.duration
    look = None
    probe = min(max(t, 0.0), duration)
    while probe <= duration:
        look = lookahead_directions(plan, probe)
        if look is not None:
            break
        if probe == duration:
            break
        probe = min(probe + 0.1, duration)
    if look is None:
        raise DegeneratePlan("no planned motion remains after t="
                             f"{t:.3f} s; nothing to recommend")
    now, nxt = look
    turn = nxt - np.dot(nxt, now) * now
    if np.linalg.norm(turn) < 1e-6:
        fallback = np.array([0.0, 0.0, 1.0])
        if abs(now[2]) > 0.99:              # vertical path: +Z degenerate
            fallback = np.array([1.0, 0.0, 0.0])
        turn = fallback - np.dot(fallback, now) * now
    turn = turn / np.linalg.norm(turn)
    top = ControlMapping(_linear(*now), _linear(*turn), "adaptive")
    return (top,) + cardinal_mappings()


def apply_input(model, q, mapping, sample, dt, v_max=_V_MAX):
    """One velocity-control step: twist = v_max*(a1*b1 + a2*b2)."""
    if mapping.gripper_on_axis1 or (sample.axis1 == 0.0 and sample.axis2 == 0.0):
        return q
    linear = v_max * (sample.axis1 * mapping.basis1.linear
                      + sample.axis2 * mapping.basis2.linear)
    angular = v_max * (sample.axis1 * mapping.basis1.angular
                       + sample.axis2 * mapping.basis2.angular)
    return ik_velocity_step(model, q, Twist(linear, angular), dt).q


def switch_mode(state):
    """Advance to the next mapping, counting the switch."""
    return replace(state,
                   active_index=(state.active_index + 1) % len(state.mappings),
                   switch_count=state.switch_count + 1)


def _candidate_axes(grid):
    pairs = [(a1, a2) for a1 in grid for a2 in grid]
    # ties resolve toward smaller deflections, then toward axis 1
    pairs.sort(key=lambda p: (abs(p[0]) + abs(p[1]), abs(p[1]),
                              p[0] < 0, p[1] < 0))
    return tuple(pairs)


_CANDIDATE_CACHE = {}


def _candidates_for(grid):
    key = tuple(grid)
    if key not in _CANDIDATE_CACHE:
        _CANDIDATE_CACHE[key] = _candidate_axes(key)
    return _CANDIDATE_CACHE[key]


def _best_progress(mapping, toward, candidates, v_max=_V_MAX):
    """Best quantized input for a mapping and the progress rate it buys."""
    if mapping.gripper_on_axis1:
        return (0.0, 0.0), 0.0
    best_axes, best_rate = (0.0, 0.0), 0.0
    for a1, a2 in candidates:
        v = v_max * (a1 * mapping.basis1.linear + a2 * mapping.basis2.linear)
        rate = float(np.dot(v, toward))
        if rate > best_rate + 1e-12:
            best_axes, best_rate = (a1, a2), rate
    return best_axes, best_rate


def scripted_user(ee, plan, t, state, timestamp_ms=0,
                  threshold=SWITCH_THRESHOLD, grid=AXIS_GRID):
    """Greedy quantized input chasing a carrot slightly ahead of t.

    Picks the grid input maximizing velocity toward the carrot; requests
    a mode switch when the active mapping achieves less than threshold
    times the best rate any mapping could achieve.
    """
    t = min(max(t, 0.0), plan.duration)
    carrot_t = min(t + CARROT_AHEAD_S, plan.segment_end_after(t))
    carrot = sample_plan(plan, carrot_t).position
    gap = carrot - ee.position
    distance = float(np.linalg.norm(gap))
    if distance < IDLE_TOL_M:
        return InputSample(0.0, 0.0, timestamp_ms=timestamp_ms)
    toward = gap / distance

    candidates = _candidates_for(grid)
    axes, active_rate = _best_progress(state.active, toward, candidates)
    all_rate = max(_best_progress(m, toward, candidates)[1]
                   for m in state.mappings)
    if all_rate > 0.0 and active_rate < threshold * all_rate:
        return InputSample(0.0, 0.0, mode_switch_pressed=True,
                           timestamp_ms=timestamp_ms)
    return InputSample(axes[0], axes[1], timestamp_ms=timestamp_ms)


class ScriptedUser:
    """Per-tick driver wrapping scripted_user with gripper handling."""

    def __init__(self, plan, threshold=SWITCH_THRESHOLD, grid=AXIS_GRID):
        self.plan = plan
        self.threshold = threshold
        self.grid = tuple(grid)

    def step(self, ee, t, state, gripper_closed, timestamp_ms=0):
        t = min(max(t, 0.0), self.plan.duration)
        want_closed = self.plan.phase_at(t) in GRASPED_PHASES
        on_spot = np.linalg.norm(
            sample_plan(self.plan, t).position - ee.position) <= GRIP_TOL_M
        if want_closed != gripper_closed and on_spot:
            return InputSample(0.0, 0.0, grip_toggle_pressed=True,
                               timestamp_ms=timestamp_ms)
        return scripted_user(ee, self.plan, t, state, timestamp_ms=timestamp_ms,
                             threshold=self.threshold, grid=self.grid)
