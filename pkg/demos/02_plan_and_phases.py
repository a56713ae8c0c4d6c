"""
Pick-and-place trajectory: waypoints, phases, trapezoidal pacing
================================================================

Plans the default block-to-target task and walks the resulting
time-parameterized path.
"""

import numpy as np

from cobot_intent import (
    ArmModel,
    MotionLimits,
    SceneConfig,
    key_points,
    plan_pick_place,
    sample_plan,
)

scene = SceneConfig.default()
points = key_points(scene)
print(f"block center:  {np.round(scene.block_center, 3)}")
print(f"target center: {np.round(scene.target_center, 3)}")
print(f"grasp point:   {np.round(points.grasp, 3)}")

plan = plan_pick_place(scene, ArmModel.default(), MotionLimits())
print(f"\nplan duration: {plan.duration:.2f} s, {len(plan.segments)} segments")

# each segment carries one task phase; dwells (grasp, release) have zero
# path length but nonzero duration
print(f"{'phase':<14}{'start s':>9}{'end s':>9}{'length m':>10}")
for seg in plan.segments:
    print(f"{seg.phase.name:<14}{seg.t0:>9.2f}{seg.t1:>9.2f}{seg.length:>10.3f}")

# sampling is exact and deterministic at any t in [0, duration]
for t in np.linspace(0.0, plan.duration, 7):
    s = sample_plan(plan, t)
    print(f"t={t:6.2f} s  phase={plan.phase_at(t).name:<11}"
          f" pos={np.round(s.position, 3)}")
