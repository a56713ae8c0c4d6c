"""Closed-loop session engine tying the simulator to the wire protocol.

One session = one pick-and-place run at a fixed 100 Hz timestep. Every
tick the engine ingests at most one input sample, advances the task
machine, and emits protocol messages; feedback messages follow the
slower haptic cadence. The emitted stream is the single source of
truth: the final metrics report is folded from it, so recomputing the
report from a saved log reproduces it field for field.
"""

import collections
import time
from dataclasses import dataclass, replace

import numpy as np

from . import protocol
from .config import session_id
from .control import (AXIS_GRID, SWITCH_THRESHOLD, ControlState, InputSample,
                      ScriptedUser, apply_input, cardinal_mappings,
                      recommend_mappings, switch_mode)
from .errors import DegeneratePlan
from .intent import (GloveAlignment, align_to_glove, arrow_glyphs,
                     change_gain, direction_to_actuators,
                     lookahead_directions)
from .kinematics import (MotionLimits, Twist, forward_kinematics,
                         ik_velocity_step, pose_error)
from .metrics import MetricsReport, fold_metrics, report_to_message
from .planning import plan_pick_place, sample_plan
from .scene import GRASPED_PHASES, Phase, TaskState, step_task

# The reference time advances only while the end effector tracks the
# path this closely. Matching the gripper tolerance guarantees that
# whenever progress reaches a gripper gate the arm is close enough to
# act, so the scripted user can never be led past an unfinished grasp.
TRACK_TOL_M = 0.005
MAX_SUBSTEPS = 10             # reference catch-up cap per tick

_PRE_GRASP = frozenset({Phase.APPROACH_PICK, Phase.DESCEND})


@dataclass(frozen=True)
class SessionView:
    """What an input driver may see when asked for this tick's sample."""

    tick: int
    timestamp_ms: int
    plan: object
    ee: object
    q: np.ndarray
    progress: float
    control: ControlState
    gripper_closed: bool
    phase: Phase


class NullDriver:
    """No input at all; autonomy sessions run with this."""

    def sample(self, view):
        return None


class ScriptedDriver:
    """Drives the session with the greedy quantized teleoperator."""

    def __init__(self, threshold=SWITCH_THRESHOLD, grid=AXIS_GRID):
        self.threshold = threshold
        self.grid = tuple(grid)
        self._user = None

    def sample(self, view):
        if self._user is None:
            self._user = ScriptedUser(view.plan, self.threshold, self.grid)
        return self._user.step(view.ee, view.progress, view.control,
                               view.gripper_closed,
                               timestamp_ms=view.timestamp_ms)


class QueueDriver:
    """Feeds externally supplied samples; the newest pending one wins."""

    def __init__(self):
        self._pending = collections.deque()

    def push(self, sample):
        self._pending.append(sample)

    def sample(self, view):
        latest = None
        while self._pending:
            latest = self._pending.popleft()
        return latest


class LogDriver:
    """Re-injects the input stream recorded in a previous session log."""

    def __init__(self, messages):
        self._by_tick = {}
        for m in messages:
            if isinstance(m, protocol.Input):
                self._by_tick[m.tick] = m
        self._by_tick = dict(self._by_tick)

    def sample(self, view):
        m = self._by_tick.get(view.tick)
        if m is None:
            return None
        return InputSample(m.axis1, m.axis2, m.mode_switch_pressed,
                           m.grip_toggle_pressed, m.timestamp_ms)


def scripted_driver(cfg):
    return ScriptedDriver(cfg.switch_threshold, cfg.axis_grid)


@dataclass(frozen=True)
class SessionResult:
    messages: tuple
    report: MetricsReport
    reason: str               # "done" | "timeout"
    ticks: int


def _dwell_ends(plan):
    grasp_end = release_end = None
    for seg in plan.segments:
        if seg.phase is Phase.GRASP:
            grasp_end = seg.t1
        elif seg.phase is Phase.RELEASE:
            release_end = seg.t1
    return grasp_end, release_end


def _progress_cap(task, grasp_end, release_end, duration):
    # the reference must not run ahead of an unfinished gripper action
    if task.phase in _PRE_GRASP and grasp_end is not None:
        return grasp_end
    if task.grasped and release_end is not None:
        return release_end
    return duration


def _advance_progress(plan, progress, ee_pos, cap, dt):
    """Move the reference toward the end effector, never past cap.

    A step is taken while the next reference point is either within
    tracking tolerance (follower behind or on the path) or strictly
    closer to the end effector than the current one (follower running
    ahead, e.g. a user chasing the carrot). Dwell segments hold a
    constant position, so crossing one always demands real proximity.
    """
    here = np.linalg.norm(sample_plan(plan, progress).position - ee_pos)
    for _ in range(MAX_SUBSTEPS):
        nxt = min(progress + dt, cap)
        if nxt <= progress:
            break
        ahead = np.linalg.norm(sample_plan(plan, nxt).position - ee_pos)
        if ahead > TRACK_TOL_M and ahead >= here - 1e-12:
            break
        progress, here = nxt, ahead
    return progress


def run_session(cfg, driver=None, log_path=None, sink=None, pacer=None):
    """Run one full session and return its messages plus the live report.

    The driver (if any) is polled once per tick; its sample is recorded
    as an Input message and, outside autonomy, applied to the arm. With
    a fixed config and a deterministic driver the entire message stream
    is a pure function of the config, ticks and wall time never mix.

    sink, if given, receives every message as it is emitted (live
    transport). pacer, if given, is called with the tick number at the
    top of every tick; transports use it to hold the loop to wall time.
    Neither affects the message content.
    """
    limits = MotionLimits()
    plan = plan_pick_place(cfg.scene, cfg.model, limits)
    duration = plan.duration
    grasp_end, release_end = _dwell_ends(plan)
    sid = session_id(cfg)
    dt = cfg.dt
    cadence = round(1.0 / (cfg.haptic_rate_hz * dt))
    budget = int(round(cfg.timeout_s / dt))
    alignment = GloveAlignment.identity()
    if driver is None:
        driver = NullDriver()

    q = np.asarray(cfg.scene.home_config, dtype=float)
    task = TaskState.initial(cfg.scene)
    ee = forward_kinematics(cfg.model, q)
    if cfg.scheme == "adaptive":
        mappings = tuple(recommend_mappings(ee, task, cfg.scene, plan, 0.0))
    else:
        mappings = tuple(cardinal_mappings())
    control = ControlState(cfg.scheme, mappings, 0, 0)

    out = []

    def push(m):
        out.append(m)
        if sink is not None:
            sink(m)

    def emit(cls, tick, **fields):
        m = cls(sid=sid, seq=len(out), tick=tick, **fields)
        push(m)
        return m

    emit(protocol.Hello, 0,
         version=protocol.PROTOCOL_VERSION, scenario=cfg.name, dt=dt,
         haptic_rate_hz=cfg.haptic_rate_hz, autonomy=cfg.autonomy,
         scheme=cfg.scheme, feedback_visual=cfg.feedback_visual,
         feedback_haptic=cfg.feedback_haptic, seed=cfg.seed,
         mapping_label=control.active.label,
         arm_axes=tuple(cfg.arm_axes),
         arm_offsets=tuple(float(o) for o in cfg.arm_offsets))

    progress = 0.0
    gripper = False
    reason = "timeout"
    final_tick = budget

    for tick in range(budget + 1):
        if pacer is not None:
            pacer(tick)
        ee = forward_kinematics(cfg.model, q)
        ts = int(round(tick * dt * 1000.0))

        if not cfg.autonomy and cfg.scheme == "adaptive":
            try:
                fresh = recommend_mappings(ee, task, cfg.scene, plan,
                                           min(progress, duration))
                control = replace(control, mappings=tuple(fresh))
            except DegeneratePlan:
                pass  # plan exhausted; keep the last usable set

        view = SessionView(tick, ts, plan, ee, q, progress, control,
                           gripper, task.phase)
        sample = driver.sample(view)
        if sample is not None:
            emit(protocol.Input, tick,
                 axis1=float(sample.axis1), axis2=float(sample.axis2),
                 mode_switch_pressed=bool(sample.mode_switch_pressed),
                 grip_toggle_pressed=bool(sample.grip_toggle_pressed),
                 timestamp_ms=int(sample.timestamp_ms))

        if cfg.autonomy:
            gripper = plan.phase_at(min(progress, duration)) in GRASPED_PHASES
        elif sample is not None:
            if sample.mode_switch_pressed:
                control = switch_mode(control)
                emit(protocol.ModeSwitch, tick,
                     index=control.active_index, label=control.active.label)
            if sample.grip_toggle_pressed:
                gripper = not gripper
            elif control.active.gripper_on_axis1 and abs(sample.axis1) >= 0.5:
                gripper = sample.axis1 > 0.0

        task, events = step_task(task, cfg.scene, ee, gripper)
        cap = _progress_cap(task, grasp_end, release_end, duration)
        progress = _advance_progress(plan, progress, ee.position, cap, dt)

        for name in events:
            emit(protocol.TaskEvent, tick, name=name)
        emit(protocol.SceneState, tick,
             q=tuple(float(v) for v in q),
             ee_pos=tuple(float(v) for v in ee.position),
             ee_ori=tuple(float(v) for v in ee.orientation),
             block_pos=tuple(float(v) for v in task.block_pose.position),
             block_ori=tuple(float(v) for v in task.block_pose.orientation),
             phase=task.phase.value, grasped=task.grasped)

        if tick % cadence == 0 and (cfg.feedback_visual or cfg.feedback_haptic):
            look = lookahead_directions(plan, min(progress, duration))
            if cfg.feedback_haptic and look is not None:
                now, nxt = look
                gain = change_gain(now, nxt)
                frame = direction_to_actuators(
                    align_to_glove(now, alignment), gain, ts)
                emit(protocol.Actuators, tick,
                     intensities=tuple(float(v) for v in frame.intensities),
                     timestamp_ms=ts)
            if cfg.feedback_visual:
                glyphs = tuple(
                    protocol.GlyphSpec(tuple(float(x) for x in g.origin),
                                       tuple(float(x) for x in g.vector),
                                       g.color)
                    for g in arrow_glyphs(ee, look))
                emit(protocol.Arrows, tick, glyphs=glyphs)

        if task.phase is Phase.DONE:
            reason, final_tick = "done", tick
            break
        if tick == budget:
            reason, final_tick = "timeout", tick
            break

        if cfg.autonomy:
            ref = sample_plan(plan, min(progress + dt, duration))
            dp, drot = pose_error(ee, ref)
            tw = Twist(dp / dt, drot / dt).clamped(limits.v_max,
                                                   limits.omega_max)
            q = ik_velocity_step(cfg.model, q, tw, dt).q
        elif sample is not None:
            q = apply_input(cfg.model, q, control.active, sample, dt)

    report = fold_metrics(out)
    push(report_to_message(report, sid, len(out), final_tick))
    push(protocol.Bye(sid=sid, seq=len(out), tick=final_tick, reason=reason))
    if log_path is not None:
        save_log(out, log_path)
    return SessionResult(tuple(out), report, reason, final_tick)


def save_log(messages, path):
    with open(path, "w", encoding="utf-8") as fh:
        for m in messages:
            fh.write(protocol.encode(m) + "\n")


def read_log(path):
    """Decoded messages in order; raises ParseError at the first bad line."""
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield protocol.decode(line)


def replay_log(path, pace=0.0):
    """Re-emit a saved log, pacing by the recorded tick clock.

    pace is a multiplier on the recorded inter-message time; 0 replays
    as fast as possible.
    """
    dt = None
    prev = None
    for m in read_log(path):
        if isinstance(m, protocol.Hello):
            dt = m.dt
        if pace > 0.0 and prev is not None and dt is not None:
            delay = (m.tick - prev) * dt * pace
            if delay > 0.0:
                time.sleep(delay)
        prev = m.tick
        yield m
