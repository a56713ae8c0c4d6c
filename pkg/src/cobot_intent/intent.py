"""Motion-intent feedback: arrow glyphs and six-actuator haptic frames.

The planned trajectory is reduced to two unit directions (the immediate
one and the one past the lookahead horizon); the angle between them sets
a gain so vibration intensity encodes how sharply the path is about to
turn. Directions are mapped onto six actuators arranged as +-X/+-Y/+-Z
of a glove-mounted frame via half-wave rectified cosines, so exactly the
actuators on the movement hemisphere are active.
"""

from dataclasses import dataclass, field

import numpy as np

from . import quat
from .errors import OutOfRange
from .planning import sample_plan

HORIZON_S = 0.5               # lookahead h: ~7.5 cm of warning at v_max
GAIN_MIN = 0.2                # baseline intensity for straight motion
ARROW_SCALE_M = 0.25
HOLD_EPS_M = 1e-4             # displacement below this reads as "not moving"

# actuator order is fixed: [+X, -X, +Y, -Y, +Z, -Z] in the glove frame
ACTUATOR_DIRECTIONS = np.array([
    [1.0, 0.0, 0.0], [-1.0, 0.0, 0.0],
    [0.0, 1.0, 0.0], [0.0, -1.0, 0.0],
    [0.0, 0.0, 1.0], [0.0, 0.0, -1.0],
])


@dataclass(frozen=True)
class ActuatorFrame:
    """One sample of six vibration intensities, each in [0, 1]."""

    intensities: tuple
    timestamp_ms: int = 0


@dataclass(frozen=True)
class ArrowGlyph:
    origin: np.ndarray
    vector: np.ndarray
    color: str                # "green" = immediate, "red" = upcoming


@dataclass(frozen=True)
class GloveAlignment:
    """Rotation taking world-frame directions into the glove frame."""

    orientation: np.ndarray = field(
        default_factory=lambda: quat.IDENTITY.copy())

    @staticmethod
    def identity():
        return GloveAlignment()


def lookahead_directions(plan, t, h=HORIZON_S):
    """Unit directions (now, next) of the plan at t, or None to hold.

    now spans [t, t+h], next spans [t+h, t+2h], both clamped to the plan
    end. Returns None when either displacement is below HOLD_EPS_M
    (dwells, plan end), meaning there is nothing to communicate.
    """
    if h <= 0.0:
        raise OutOfRange(f"horizon must be positive, got {h}")
    duration = plan.duration
    if t < 0.0 or t > duration:
        raise OutOfRange(f"t={t} outside [0, {duration}]")
    p0 = sample_plan(plan, t).position
    p1 = sample_plan(plan, min(t + h, duration)).position
    p2 = sample_plan(plan, min(t + 2.0 * h, duration)).position
    d_now = p1 - p0
    d_next = p2 - p1
    n_now = np.linalg.norm(d_now)
    n_next = np.linalg.norm(d_next)
    if n_now < HOLD_EPS_M or n_next < HOLD_EPS_M:
        return None
    return d_now / n_now, d_next / n_next


def change_gain(now, nxt, g_min=GAIN_MIN):
    """Intensity gain in [g_min, 1], linear in the angle between the
    immediate and upcoming directions."""
    theta = float(np.arccos(np.clip(np.dot(now, nxt), -1.0, 1.0)))
    return g_min + (1.0 - g_min) * (theta / np.pi)


def align_to_glove(d, alignment):
    """Rotate a world-frame direction into the glove frame."""
    return quat.rotate(alignment.orientation, np.asarray(d, dtype=float))


def direction_to_actuators(d_glove, gain, timestamp_ms=0):
    """Haptic frame for a unit direction: intensity_i = gain * max(0, d.e_i).

    Only actuators on the hemisphere of d_glove activate; opposite pairs
    are mutually exclusive by construction and the squared intensities
    sum to gain^2 for unit d_glove.
    """
    dots = ACTUATOR_DIRECTIONS @ np.asarray(d_glove, dtype=float)
    intensities = gain * np.maximum(0.0, dots)
    return ActuatorFrame(tuple(float(i) for i in intensities), timestamp_ms)


def arrow_glyphs(ee, lookahead, scale=ARROW_SCALE_M):
    """Two arrows at the EE for a (now, next) pair; empty list on hold."""
    if lookahead is None:
        return []
    now, nxt = lookahead
    origin = np.asarray(ee.position, dtype=float)
    return [
        ArrowGlyph(origin.copy(), scale * np.asarray(now, dtype=float), "green"),
        ArrowGlyph(origin.copy(), scale * np.asarray(nxt, dtype=float), "red"),
    ]
