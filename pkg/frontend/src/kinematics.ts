/**
 * Forward-kinematics mirror of the service's arm model, built from the
 * axis letters and link offsets in the hello message. The client only
 * draws the chain; joint angles always come from the stream, so this
 * stays a pure function of (hello, q).
 *
 * Conventions match the service: quaternions are (w, x, y, z), joint j
 * contributes Trans([0, 0, offset_j]) * Rot(axis_j, q_j) in its parent
 * frame, and the end effector sits at the origin of the last frame.
 */

import type { Hello, Quat, Vec3 } from "./protocol.js";

const AXIS_VECTORS: Record<"X" | "Y" | "Z", Vec3> = {
  X: [1, 0, 0],
  Y: [0, 1, 0],
  Z: [0, 0, 1],
};

export const QUAT_IDENTITY: Quat = [1, 0, 0, 0];

export function quatMultiply(a: Quat, b: Quat): Quat {
  const [aw, ax, ay, az] = a;
  const [bw, bx, by, bz] = b;
  return [
    aw * bw - ax * bx - ay * by - az * bz,
    aw * bx + ax * bw + ay * bz - az * by,
    aw * by - ax * bz + ay * bw + az * bx,
    aw * bz + ax * by - ay * bx + az * bw,
  ];
}

export function quatFromAxisAngle(axis: Vec3, angle: number): Quat {
  const half = angle / 2;
  const s = Math.sin(half);
  return [Math.cos(half), axis[0] * s, axis[1] * s, axis[2] * s];
}

export function quatRotate(q: Quat, v: Vec3): Vec3 {
  // v' = v + 2 w (u x v) + 2 (u x (u x v)) with u the vector part
  const [w, ux, uy, uz] = q;
  const [vx, vy, vz] = v;
  const cx = uy * vz - uz * vy;
  const cy = uz * vx - ux * vz;
  const cz = ux * vy - uy * vx;
  const dx = uy * cz - uz * cy;
  const dy = uz * cx - ux * cz;
  const dz = ux * cy - uy * cx;
  return [
    vx + 2 * (w * cx + dx),
    vy + 2 * (w * cy + dy),
    vz + 2 * (w * cz + dz),
  ];
}

/**
 * World positions of the chain: the base origin followed by each joint
 * frame origin. The last entry is the end-effector position, so the
 * polyline through the points draws the whole arm.
 */
export function chainPoints(hello: Hello, q: number[]): Vec3[] {
  const n = hello.arm_axes.length;
  if (q.length !== n) {
    throw new Error(`expected ${n} joint angles, got ${q.length}`);
  }
  let pos: Vec3 = [0, 0, 0];
  let ori: Quat = QUAT_IDENTITY;
  const points: Vec3[] = [pos];
  for (let j = 0; j < n; j += 1) {
    const axisLetter = hello.arm_axes[j]!;
    const offset: Vec3 = [0, 0, hello.arm_offsets[j]!];
    const step = quatRotate(ori, offset);
    pos = [pos[0] + step[0], pos[1] + step[1], pos[2] + step[2]];
    points.push(pos);
    ori = quatMultiply(ori, quatFromAxisAngle(AXIS_VECTORS[axisLetter], q[j]!));
  }
  return points;
}

/**
 * Distance between the locally computed end effector and the streamed
 * one. Anything beyond a millimeter means the local model disagrees
 * with the service and the arm drawing cannot be trusted.
 */
export function eeMismatch(hello: Hello, q: number[], ee_pos: Vec3): number {
  const points = chainPoints(hello, q);
  const ee = points[points.length - 1]!;
  const dx = ee[0] - ee_pos[0];
  const dy = ee[1] - ee_pos[1];
  const dz = ee[2] - ee_pos[2];
  return Math.sqrt(dx * dx + dy * dy + dz * dz);
}

export const EE_MISMATCH_WARN_M = 1e-3;
