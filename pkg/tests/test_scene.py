"""Scene validation and task state machine tests."""

import numpy as np
import pytest

from cobot_intent import quat
from cobot_intent.errors import ConfigError
from cobot_intent.kinematics import Pose
from cobot_intent.scene import (
    GRASPED_PHASES,
    PHASE_ORDER,
    Phase,
    SceneConfig,
    TaskState,
    key_points,
    step_task,
)


def default_scene():
    return SceneConfig.default()


def test_default_scene_validates():
    scene = default_scene()
    assert scene.block_side == 0.04
    assert scene.target_radius == 0.02
    assert scene.block_center[2] == pytest.approx(scene.block_side / 2.0)


def test_validate_rejects_floating_block():
    scene = default_scene()
    bad = SceneConfig(
        table_height=0.0,
        table_bounds=scene.table_bounds,
        block_center=np.array([0.45, -0.25, 0.05]),
        block_side=0.04,
        target_center=scene.target_center,
        target_radius=scene.target_radius,
    )
    with pytest.raises(ConfigError):
        bad.validate()


def test_validate_rejects_target_outside_bounds():
    scene = default_scene()
    bad = SceneConfig(
        table_height=0.0,
        table_bounds=(-0.3, 0.3, -0.3, 0.3),
        block_center=np.array([0.25, 0.0, 0.02]),
        block_side=0.04,
        target_center=np.array([0.5, 0.0, 0.0]),
        target_radius=scene.target_radius,
    )
    with pytest.raises(ConfigError):
        bad.validate()


def test_validate_rejects_block_target_overlap():
    bad = SceneConfig(
        table_height=0.0,
        table_bounds=(-0.8, 0.8, -0.8, 0.8),
        block_center=np.array([0.45, -0.25, 0.02]),
        block_side=0.04,
        target_center=np.array([0.46, -0.26, 0.0]),
        target_radius=0.02,
    )
    with pytest.raises(ConfigError):
        bad.validate()


def test_key_points_geometry():
    scene = default_scene()
    points = key_points(scene)
    top = scene.block_center[2] + scene.block_side / 2.0
    assert np.allclose(points.pregrasp,
                       [scene.block_center[0], scene.block_center[1],
                        top + 0.10])
    assert np.allclose(points.grasp, scene.block_center)
    assert points.lift_top[2] == pytest.approx(0.25)
    assert np.allclose(points.above_target[:2], scene.target_center[:2])
    assert points.place[2] == pytest.approx(scene.block_center[2])
    assert points.retreat[2] == pytest.approx(0.14)
    assert points.transport_height == pytest.approx(0.25)


def test_step_task_far_ee_changes_nothing():
    scene = default_scene()
    state = TaskState.initial(scene)
    ee = Pose.of((0.0, 0.0, 0.9))
    nxt, events = step_task(state, scene, ee, gripper_closed=False)
    assert nxt.phase is Phase.APPROACH_PICK
    assert not nxt.grasped
    assert events == []
    assert np.allclose(nxt.block_pose.position, scene.block_center)


def test_grasp_requires_gripper_closed():
    scene = default_scene()
    points = key_points(scene)
    state = TaskState(Phase.DESCEND, False, Pose.of(scene.block_center),
                      np.zeros(3), quat.IDENTITY.copy())
    ee = Pose.of(points.grasp)
    nxt, events = step_task(state, scene, ee, gripper_closed=False)
    assert nxt.phase is Phase.DESCEND
    assert events == []
    nxt, events = step_task(state, scene, ee, gripper_closed=True)
    assert nxt.phase is Phase.GRASP
    assert nxt.grasped
    assert events == ["grasped"]


def run_scripted_keypoint_walk(scene):
    """Drive the EE pose through the key points in task order, with the
    gripper flag matching the phase, collecting (phase, events, state)."""
    points = key_points(scene)
    state = TaskState.initial(scene)
    trace = []

    # (ee position, gripper closed) in the order the task expects
    steps = [
        (points.pregrasp, False),      # -> Descend
        (points.grasp, True),          # -> Grasp
        (points.grasp + [0, 0, 0.03], True),    # -> Lift
        (points.lift_top, True),       # -> Transport
        (points.above_target, True),   # -> Lower
        (points.place, False),         # -> Release (block settles)
        (points.place, False),         # -> Retreat ("placed")
        (points.retreat, False),       # -> Done
    ]
    for pos, closed in steps:
        ee = Pose.of(np.asarray(pos, dtype=float))
        state, events = step_task(state, scene, ee, closed)
        trace.append((state, events))
    return trace


def test_full_phase_sequence_in_order():
    scene = default_scene()
    trace = run_scripted_keypoint_walk(scene)
    phases = [s.phase for s, _ in trace]
    assert phases == [
        Phase.DESCEND, Phase.GRASP, Phase.LIFT, Phase.TRANSPORT,
        Phase.LOWER, Phase.RELEASE, Phase.RETREAT, Phase.DONE,
    ]
    events = [e for _, evs in trace for e in evs]
    assert events == [
        "reached_pregrasp", "grasped", "lifting", "transporting",
        "lowering", "released", "placed", "done",
    ]


def test_grasped_exactly_in_grasped_phases():
    scene = default_scene()
    for state, _ in run_scripted_keypoint_walk(scene):
        assert state.grasped == (state.phase in GRASPED_PHASES)


def test_block_never_penetrates_table():
    scene = default_scene()
    for state, _ in run_scripted_keypoint_walk(scene):
        bottom = state.block_pose.position[2] - scene.block_side / 2.0
        assert bottom >= scene.table_height - 1e-6


def test_grasped_block_follows_ee_rigidly():
    scene = default_scene()
    points = key_points(scene)
    state = TaskState(Phase.DESCEND, False, Pose.of(scene.block_center),
                      np.zeros(3), quat.IDENTITY.copy())
    # grasp slightly off-center, within the 0.015 m tolerance
    grasp_ee = Pose.of(points.grasp + np.array([0.004, -0.003, 0.002]))
    state, events = step_task(state, scene, grasp_ee, gripper_closed=True)
    assert events == ["grasped"]
    offset0 = state.block_pose.position - grasp_ee.position

    rng = np.random.default_rng(3)
    ee_pos = grasp_ee.position.copy()
    for _ in range(20):
        ee_pos = ee_pos + rng.uniform(-0.01, 0.02, size=3) * [1, 1, 2]
        ee = Pose(ee_pos, grasp_ee.orientation)
        state, _ = step_task(state, scene, ee, gripper_closed=True)
        if not state.grasped:
            break
        assert np.allclose(state.block_pose.position - ee.position, offset0,
                           atol=1e-12)


def test_grasped_block_rotates_with_ee():
    scene = default_scene()
    points = key_points(scene)
    state = TaskState(Phase.DESCEND, False, Pose.of(scene.block_center),
                      np.zeros(3), quat.IDENTITY.copy())
    ee = Pose.of(points.grasp)
    state, _ = step_task(state, scene, ee, gripper_closed=True)
    spin = quat.from_axis_angle(np.array([0.0, 0.0, 1.0]), 0.4)
    ee2 = Pose(ee.position + np.array([0.0, 0.0, 0.05]),
               quat.multiply(spin, ee.orientation))
    state, _ = step_task(state, scene, ee2, gripper_closed=True)
    # block orientation picked up the same extra spin
    assert quat.angle_between(state.block_pose.orientation,
                              quat.multiply(spin, quat.IDENTITY)) < 1e-9


def test_release_requires_block_near_table():
    scene = default_scene()
    points = key_points(scene)
    state = TaskState(Phase.LOWER, True, Pose.of(points.above_target),
                      np.zeros(3), quat.IDENTITY.copy())
    high = Pose.of(points.above_target)  # block still at transport height
    nxt, events = step_task(state, scene, high, gripper_closed=False)
    assert nxt.phase is Phase.LOWER
    assert events == []


def test_release_settles_block_onto_table():
    scene = default_scene()
    points = key_points(scene)
    state = TaskState(Phase.LOWER, True, Pose.of(points.place),
                      np.zeros(3), quat.IDENTITY.copy())
    ee = Pose.of(points.place + np.array([0.0, 0.0, 0.004]))
    nxt, events = step_task(state, scene, ee, gripper_closed=False)
    assert events == ["released"]
    assert not nxt.grasped
    bottom = nxt.block_pose.position[2] - scene.block_side / 2.0
    assert bottom == pytest.approx(scene.table_height, abs=1e-12)


def test_placed_requires_block_within_target_radius():
    scene = default_scene()
    off_target = scene.target_center + np.array([0.05, 0.0, 0.0])
    block = Pose.of(np.array([off_target[0], off_target[1], 0.02]))
    state = TaskState(Phase.RELEASE, False, block, np.zeros(3), quat.IDENTITY.copy())
    ee = Pose.of(block.position + np.array([0.0, 0.0, 0.004]))
    nxt, events = step_task(state, scene, ee, gripper_closed=False)
    assert nxt.phase is Phase.RELEASE
    assert events == []


def test_random_walk_phases_monotone_without_skips():
    scene = default_scene()
    rng = np.random.default_rng(11)
    state = TaskState.initial(scene)
    order = {p: i for i, p in enumerate(PHASE_ORDER)}
    pos = np.array([0.3, 0.0, 0.3])
    for _ in range(500):
        pos = pos + rng.uniform(-0.05, 0.05, size=3)
        pos[2] = max(pos[2], 0.0)
        closed = bool(rng.integers(0, 2))
        nxt, events = step_task(state, scene, Pose.of(pos), closed)
        assert order[nxt.phase] - order[state.phase] in (0, 1)
        assert len(events) <= 1
        state = nxt
