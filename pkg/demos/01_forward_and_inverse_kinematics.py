"""
Arm geometry basics: forward kinematics, Jacobian, inverse kinematics
=====================================================================

Builds the default 7-joint arm, reads off a few poses, and closes the
loop with the damped-least-squares solver.
"""

import numpy as np

from cobot_intent import (
    ArmModel,
    forward_kinematics,
    jacobian,
    manipulability,
    solve_ik,
)

model = ArmModel.default()

# all joints at zero: the arm points straight up, link offsets sum along z
pose = forward_kinematics(model, np.zeros(7))
print(f"zero config EE position: {np.round(pose.position, 4)}")
print(f"total reach: {model.total_reach:.3f} m")

# the scenario home posture keeps the tool pointing down at the table
home = np.array([0.0, 0.4, 0.0, 1.5, 0.0, np.pi - 1.9, 0.0])
pose = forward_kinematics(model, home)
print(f"home EE position:        {np.round(pose.position, 4)}")
print(f"home EE orientation (wxyz quat): {np.round(pose.orientation, 4)}")

# the Jacobian maps joint velocity to EE twist; its singular values tell
# how close the posture is to losing a direction of motion
J = jacobian(model, home)
print(f"jacobian shape: {J.shape}")
print(f"manipulability at home: {manipulability(J):.4f}")

# round trip: perturb the home posture, take its pose as the IK target,
# and solve starting from home
q_goal = home + np.array([0.3, -0.1, 0.2, -0.2, 0.1, 0.15, -0.3])
target = forward_kinematics(model, q_goal)
result = solve_ik(model, target, seed=home)
print(f"ik converged: {result.converged} after {result.iterations} iterations")
print(f"position error:    {result.position_error:.2e} m")
print(f"orientation error: {result.orientation_error:.2e} rad")

# the solver finds *a* configuration for the pose, not necessarily q_goal:
# the arm is redundant, one task pose has a whole self-motion manifold
print(f"joint-space distance to the original config: "
      f"{np.linalg.norm(result.q - q_goal):.3f} rad")
