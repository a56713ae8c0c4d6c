"""Experiment configuration: one TOML file reproduces a whole session.

Sections: [arm], [scene], [session], [control], [feedback]. The schema
is versioned; validation happens before anything runs. The session id
is a hash over the canonical form of the configuration plus the seed,
so identical configurations always produce identical ids.
"""

import hashlib
import json
from dataclasses import dataclass, replace

try:
    import tomllib
except ModuleNotFoundError:                       # Python < 3.11
    import tomli as tomllib

import numpy as np

from .control import AXIS_GRID, SWITCH_THRESHOLD
from .errors import ConfigError, LimitViolation
from .kinematics import (
    DEFAULT_AXES,
    DEFAULT_IK_DAMPING,
    DEFAULT_LIMITS_RAD,
    DEFAULT_OFFSETS_M,
    ArmModel,
    Joint,
    N_JOINTS,
    Pose,
)
from .scene import SceneConfig

CONFIG_VERSION = 1
TIMEOUT_S = 120.0
DT_S = 0.01                    # the one supported timestep
SCHEMES = ("cardinal", "adaptive")

_AXIS_LETTERS = {"x": np.array([1.0, 0.0, 0.0]),
                 "y": np.array([0.0, 1.0, 0.0]),
                 "z": np.array([0.0, 0.0, 1.0])}


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    model: ArmModel
    scene: SceneConfig
    arm_axes: tuple            # axis letters, kept for the wire handshake
    arm_offsets: tuple
    dt: float = DT_S
    haptic_rate_hz: int = 50
    autonomy: bool = False
    seed: int = 42
    scheme: str = "adaptive"
    switch_threshold: float = SWITCH_THRESHOLD
    axis_grid: tuple = AXIS_GRID
    feedback_visual: bool = True
    feedback_haptic: bool = True
    timeout_s: float = TIMEOUT_S


def default_config(**overrides):
    """Built-in default experiment; overrides replace top-level fields."""
    cfg = ExperimentConfig(
        name="default",
        model=ArmModel.default(),
        scene=SceneConfig.default(),
        arm_axes=tuple(a.upper() for a in DEFAULT_AXES),
        arm_offsets=tuple(float(o) for o in DEFAULT_OFFSETS_M),
    )
    if overrides:
        cfg = replace(cfg, **overrides)
    return validate_config(cfg)


def validate_config(cfg):
    if cfg.dt != DT_S:
        raise ConfigError(f"timestep must be {DT_S} s, got {cfg.dt}")
    ticks_per_s = round(1.0 / cfg.dt)
    if cfg.haptic_rate_hz <= 0 or ticks_per_s % cfg.haptic_rate_hz != 0:
        raise ConfigError(
            f"haptic rate {cfg.haptic_rate_hz} Hz must divide {ticks_per_s} Hz")
    if cfg.scheme not in SCHEMES:
        raise ConfigError(f"scheme must be one of {SCHEMES}, got {cfg.scheme!r}")
    if not isinstance(cfg.seed, int):
        raise ConfigError("seed must be an integer")
    if not (0.0 < cfg.switch_threshold < 1.0):
        raise ConfigError("switch threshold must lie in (0, 1)")
    if len(cfg.axis_grid) < 2 or 0.0 not in cfg.axis_grid:
        raise ConfigError("axis grid needs at least two levels including 0")
    if any(abs(a) > 1.0 for a in cfg.axis_grid):
        raise ConfigError("axis grid levels must lie in [-1, 1]")
    if cfg.timeout_s <= 0:
        raise ConfigError("timeout must be positive")
    if len(cfg.model.joints) != N_JOINTS:
        raise ConfigError(f"arm must have exactly {N_JOINTS} joints")
    cfg.scene.validate()
    home = np.asarray(cfg.scene.home_config, dtype=float)
    if home.shape != (N_JOINTS,):
        raise ConfigError("home configuration must list one angle per joint")
    try:
        cfg.model.assert_within_limits(home)
    except LimitViolation as exc:
        raise ConfigError(f"home configuration invalid: {exc}") from exc
    return cfg


def _section(data, name):
    sec = data.get(name, {})
    if not isinstance(sec, dict):
        raise ConfigError(f"[{name}] must be a table")
    return dict(sec)


def _take(sec, key, kind, default=None, required=False):
    if key not in sec:
        if required:
            raise ConfigError(f"missing required key {key!r}")
        return default
    value = sec.pop(key)
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if kind is not None and not isinstance(value, kind):
        raise ConfigError(f"key {key!r} has the wrong type")
    return value


def _vector(sec, key, n, default=None):
    value = _take(sec, key, list, default=None)
    if value is None:
        return None if default is None else np.asarray(default, dtype=float)
    if len(value) != n or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool)
            for v in value):
        raise ConfigError(f"key {key!r} must be a list of {n} numbers")
    return np.asarray(value, dtype=float)


def _reject_leftovers(sec, name):
    if sec:
        raise ConfigError(f"unknown keys in [{name}]: {sorted(sec)}")


def _arm_from(sec):
    axes = _take(sec, "axes", list, default=list(DEFAULT_AXES))
    letters = [str(a).lower() for a in axes]
    if len(letters) != N_JOINTS or any(a not in _AXIS_LETTERS for a in letters):
        raise ConfigError("arm axes must be 7 letters from x/y/z")
    offsets = _vector(sec, "offsets_m", N_JOINTS, default=DEFAULT_OFFSETS_M)
    if np.any(offsets <= 0.0):
        raise ConfigError("arm offsets must be positive")
    limits = _vector(sec, "limits_rad", N_JOINTS, default=DEFAULT_LIMITS_RAD)
    if np.any(limits <= 0.0):
        raise ConfigError("arm limits must be positive")
    damping = _take(sec, "ik_damping", float, default=DEFAULT_IK_DAMPING)
    if damping <= 0.0:
        raise ConfigError("ik damping must be positive")
    _reject_leftovers(sec, "arm")
    joints = tuple(
        Joint(axis=_AXIS_LETTERS[a].copy(),
              offset=np.array([0.0, 0.0, float(off)]),
              lower=-float(lim), upper=float(lim))
        for a, off, lim in zip(letters, offsets, limits))
    model = ArmModel(joints=joints, ik_damping=float(damping))
    return model, tuple(a.upper() for a in letters), tuple(float(o) for o in offsets)


def _scene_from(sec):
    ref = SceneConfig.default()    # single source for omitted keys
    scene = SceneConfig(
        table_height=_take(sec, "table_height", float,
                           default=ref.table_height),
        table_bounds=tuple(_vector(sec, "table_bounds", 4,
                                   default=ref.table_bounds)),
        block_center=_vector(sec, "block_center", 3,
                             default=ref.block_center),
        block_side=_take(sec, "block_side", float, default=ref.block_side),
        target_center=_vector(sec, "target_center", 3,
                              default=ref.target_center),
        target_radius=_take(sec, "target_radius", float,
                            default=ref.target_radius),
        home_config=_vector(sec, "home_config", N_JOINTS,
                            default=ref.home_config),
        keep_out_radius=_take(sec, "keep_out_radius", float,
                              default=ref.keep_out_radius),
        base=Pose.of(tuple(_vector(sec, "base_position", 3,
                                   default=(0.0, 0.0, 0.0)))),
    )
    _reject_leftovers(sec, "scene")
    return scene


def load_config(path):
    """Parse and validate one experiment file."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config {path} is not valid TOML: {exc}") from exc

    version = data.get("version")
    if version != CONFIG_VERSION:
        raise ConfigError(
            f"config schema version must be {CONFIG_VERSION}, got {version!r}")

    model, axes, offsets = _arm_from(_section(data, "arm"))
    scene = _scene_from(_section(data, "scene"))

    ses = _section(data, "session")
    name = _take(ses, "name", str, default="default")
    dt = _take(ses, "dt", float, default=DT_S)
    rate = _take(ses, "haptic_rate_hz", int, default=50)
    autonomy = _take(ses, "autonomy", bool, default=False)
    seed = _take(ses, "seed", int, default=42)
    timeout = _take(ses, "timeout_s", float, default=TIMEOUT_S)
    _reject_leftovers(ses, "session")

    ctl = _section(data, "control")
    scheme = _take(ctl, "scheme", str, default="adaptive")
    threshold = _take(ctl, "switch_threshold", float, default=SWITCH_THRESHOLD)
    grid_vec = _take(ctl, "axis_grid", list, default=list(AXIS_GRID))
    if not all(isinstance(a, (int, float)) and not isinstance(a, bool)
               for a in grid_vec):
        raise ConfigError("axis grid must be a list of numbers")
    _reject_leftovers(ctl, "control")

    fb = _section(data, "feedback")
    visual = _take(fb, "visual", bool, default=True)
    haptic = _take(fb, "haptic", bool, default=True)
    _reject_leftovers(fb, "feedback")

    known = {"version", "arm", "scene", "session", "control", "feedback"}
    extra = set(data) - known
    if extra:
        raise ConfigError(f"unknown top-level keys: {sorted(extra)}")

    cfg = ExperimentConfig(
        name=name, model=model, scene=scene, arm_axes=axes,
        arm_offsets=offsets, dt=dt, haptic_rate_hz=rate, autonomy=autonomy,
        seed=seed, scheme=scheme, switch_threshold=float(threshold),
        axis_grid=tuple(float(a) for a in grid_vec),
        feedback_visual=visual, feedback_haptic=haptic, timeout_s=timeout,
    )
    return validate_config(cfg)


def canonical_dict(cfg):
    """Plain-value form of the configuration used for hashing and Hello."""
    scene = cfg.scene
    return {
        "name": cfg.name,
        "arm": {
            "axes": list(cfg.arm_axes),
            "offsets_m": [float(o) for o in cfg.arm_offsets],
            "limits_rad": [float(j.upper) for j in cfg.model.joints],
            "ik_damping": float(cfg.model.ik_damping),
        },
        "scene": {
            "table_height": float(scene.table_height),
            "table_bounds": [float(b) for b in scene.table_bounds],
            "block_center": [float(v) for v in scene.block_center],
            "block_side": float(scene.block_side),
            "target_center": [float(v) for v in scene.target_center],
            "target_radius": float(scene.target_radius),
            "keep_out_radius": float(scene.keep_out_radius),
            "home_config": [float(v) for v in scene.home_config],
            "base_position": [float(v) for v in scene.base.position],
        },
        "session": {
            "dt": float(cfg.dt),
            "haptic_rate_hz": int(cfg.haptic_rate_hz),
            "autonomy": bool(cfg.autonomy),
            "seed": int(cfg.seed),
            "timeout_s": float(cfg.timeout_s),
        },
        "control": {
            "scheme": cfg.scheme,
            "switch_threshold": float(cfg.switch_threshold),
            "axis_grid": [float(a) for a in cfg.axis_grid],
        },
        "feedback": {
            "visual": bool(cfg.feedback_visual),
            "haptic": bool(cfg.feedback_haptic),
        },
    }


def session_id(cfg):
    """Deterministic 12-hex-digit id for a configuration + seed."""
    blob = json.dumps(canonical_dict(cfg), sort_keys=True,
                      separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:12]
