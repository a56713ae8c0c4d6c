import numpy as np
import pytest
from scipy.spatial.transform import Rotation, Slerp

from cobot_intent import quat


def scipy_quat(q):
    # scipy uses (x, y, z, w)
    return Rotation.from_quat([q[1], q[2], q[3], q[0]])


def random_unit_quats(rng, n):
    q = rng.standard_normal((n, 4))
    return q / np.linalg.norm(q, axis=1, keepdims=True)


def test_multiply_matches_scipy():
    rng = np.random.default_rng(1)
    for a, b in zip(random_unit_quats(rng, 50), random_unit_quats(rng, 50)):
        got = quat.multiply(a, b)
        want = scipy_quat(a) * scipy_quat(b)
        assert np.allclose(quat.to_matrix(got), want.as_matrix(), atol=1e-12)


def test_rotate_matches_matrix():
    rng = np.random.default_rng(2)
    for q in random_unit_quats(rng, 50):
        v = rng.standard_normal(3)
        assert np.allclose(quat.rotate(q, v), quat.to_matrix(q) @ v, atol=1e-12)
        assert np.allclose(quat.rotate(q, v), scipy_quat(q).apply(v), atol=1e-12)


def test_from_axis_angle_roundtrip():
    rng = np.random.default_rng(3)
    for _ in range(50):
        axis = rng.standard_normal(3)
        axis /= np.linalg.norm(axis)
        angle = rng.uniform(-np.pi, np.pi)
        q = quat.from_axis_angle(axis, angle)
        rv = quat.to_rotvec(q)
        assert np.allclose(rv, axis * angle, atol=1e-9)


def test_rotate_preserves_norm():
    rng = np.random.default_rng(4)
    for q in random_unit_quats(rng, 20):
        v = rng.standard_normal(3)
        assert np.linalg.norm(quat.rotate(q, v)) == pytest.approx(np.linalg.norm(v), abs=1e-12)


def test_angle_between_is_relative_rotation_angle():
    rng = np.random.default_rng(5)
    for a, b in zip(random_unit_quats(rng, 30), random_unit_quats(rng, 30)):
        rel = scipy_quat(a).inv() * scipy_quat(b)
        want = np.linalg.norm(rel.as_rotvec())
        assert quat.angle_between(a, b) == pytest.approx(want, abs=1e-9)
        # sign of either operand is irrelevant
        assert quat.angle_between(-a, b) == pytest.approx(want, abs=1e-9)


def test_slerp_matches_scipy():
    rng = np.random.default_rng(6)
    for a, b in zip(random_unit_quats(rng, 20), random_unit_quats(rng, 20)):
        sl = Slerp([0.0, 1.0], Rotation.concatenate([scipy_quat(a), scipy_quat(b)]))
        for t in (0.0, 0.25, 0.5, 0.9, 1.0):
            got = quat.slerp(a, b, t)
            want = sl(t).as_matrix()
            assert np.allclose(quat.to_matrix(got), want, atol=1e-9)


def test_slerp_endpoints_exact():
    a = quat.from_axis_angle(np.array([0.0, 0.0, 1.0]), 0.3)
    b = quat.from_axis_angle(np.array([1.0, 0.0, 0.0]), -1.1)
    assert np.allclose(quat.slerp(a, b, 0.0), a, atol=1e-15)
    assert np.allclose(quat.slerp(a, b, 1.0), b, atol=1e-15)


def test_normalize_rejects_zero():
    with pytest.raises(ValueError):
        quat.normalize(np.zeros(4))
