"""
Motion-intent feedback: arrow glyphs and glove actuator intensities
===================================================================

Shows how the planned path is turned into the two feedback channels:
a (now, next) direction pair rendered as arrows, and six vibration
intensities for a glove with actuators on the +/- x, y, z axes.
"""

import numpy as np

from cobot_intent import (
    ArmModel,
    MotionLimits,
    SceneConfig,
    arrow_glyphs,
    change_gain,
    direction_to_actuators,
    lookahead_directions,
    plan_pick_place,
    sample_plan,
)

scene = SceneConfig.default()
plan = plan_pick_place(scene, ArmModel.default(), MotionLimits())

AXES = ("+x", "-x", "+y", "-y", "+z", "-z")

# walk the plan and report what each channel would communicate
for t in (0.5, 2.0, 4.0, 6.0, 8.0):
    look = lookahead_directions(plan, t)
    phase = plan.phase_at(t).name
    if look is None:
        # dwell or plan end: nothing to communicate, both channels hold
        print(f"t={t:4.1f} s  {phase:<11} hold (no motion within horizon)")
        continue
    now, nxt = look
    gain = change_gain(now, nxt)
    frame = direction_to_actuators(now, gain)
    lit = [f"{a}={v:.2f}" for a, v in zip(AXES, frame.intensities) if v > 0]
    print(f"t={t:4.1f} s  {phase:<11} gain={gain:.2f}  {' '.join(lit)}")

# the gain rises with the turn angle between now and next: straight
# motion stays subtle, an upcoming direction change emphasizes itself
straight = change_gain(np.array([1.0, 0, 0]), np.array([1.0, 0, 0]))
right_angle = change_gain(np.array([1.0, 0, 0]), np.array([0, 1.0, 0]))
reverse = change_gain(np.array([1.0, 0, 0]), np.array([-1.0, 0, 0]))
print(f"\ngain straight={straight:.2f}  right angle={right_angle:.2f}"
      f"  reversal={reverse:.2f}")

# the visual channel renders the same pair as two arrows at the EE:
# green for the immediate direction, red for the upcoming one
t = 2.0
ee = sample_plan(plan, t)
for glyph in arrow_glyphs(ee, lookahead_directions(plan, t)):
    print(f"{glyph.color:>5} arrow at {np.round(glyph.origin, 3)}"
          f" pointing {np.round(glyph.vector, 3)}")
