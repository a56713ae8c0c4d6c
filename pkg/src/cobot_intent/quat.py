"""Unit-quaternion helpers, (w, x, y, z) convention.

All functions take and return plain float64 numpy arrays. Nothing here
normalizes its inputs implicitly except where documented; callers keep
quaternions unit-length.
"""

import numpy as np

IDENTITY = np.array([1.0, 0.0, 0.0, 0.0])


def normalize(q):
    q = np.asarray(q, dtype=float)
    n = np.linalg.norm(q)
    if n == 0.0:
        raise ValueError("cannot normalize zero quaternion")
    return q / n


def multiply(a, b):
    """Hamilton product a*b (apply b's rotation, then a's)."""
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ]
    )


def conjugate(q):
    return np.array([q[0], -q[1], -q[2], -q[3]])


def rotate(q, v):
    """Rotate 3-vector v by unit quaternion q."""
    w = q[0]
    u = q[1:]
    v = np.asarray(v, dtype=float)
    # Rodrigues form of q v q^-1; cheaper than building the matrix.
    return v + 2.0 * np.cross(u, np.cross(u, v) + w * v)


def from_axis_angle(axis, angle):
    axis = np.asarray(axis, dtype=float)
    half = 0.5 * angle
    q = np.empty(4)
    q[0] = np.cos(half)
    q[1:] = np.sin(half) * axis
    return q


def to_matrix(q):
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def to_rotvec(q):
    """Axis-angle vector (axis * angle, radians) of a unit quaternion."""
    w = float(np.clip(q[0], -1.0, 1.0))
    u = np.asarray(q[1:], dtype=float)
    s = np.linalg.norm(u)
    if s < 1e-12:
        return np.zeros(3)
    angle = 2.0 * np.arctan2(s, w)
    if angle > np.pi:
        angle -= 2.0 * np.pi
    return (angle / s) * u


def angle_between(a, b):
    """Rotation angle in [0, pi] carrying quaternion a onto b."""
    d = abs(float(np.dot(a, b)))
    return 2.0 * np.arccos(min(d, 1.0))


def slerp(a, b, t):
    """Spherical interpolation from a (t=0) to b (t=1), shortest arc."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = float(np.dot(a, b))
    if d < 0.0:
        b = -b
        d = -d
    if d > 1.0 - 1e-12:
        return normalize(a + t * (b - a))
    theta = np.arccos(d)
    s = np.sin(theta)
    return (np.sin((1.0 - t) * theta) / s) * a + (np.sin(t * theta) / s) * b
