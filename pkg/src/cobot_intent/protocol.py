"""Line-delimited session protocol: nine message variants, one JSON
object per line.

Encoding is canonical (sorted keys, no whitespace, shortest round-trip
float rendering), so identical message sequences produce byte-identical
logs. Every message carries the session id, a strictly increasing
sequence number, and the simulation tick it was produced at; several
messages may share a tick, the sequence number orders them.
"""

import json
from dataclasses import dataclass

from .errors import ParseError, UnknownTag, VersionError

PROTOCOL_VERSION = 1
LOG_SUFFIX = ".cobotlog"
COLORS = ("green", "red")


@dataclass(frozen=True)
class GlyphSpec:
    """Wire form of one intent arrow."""

    origin: tuple               # 3 floats, m
    vector: tuple               # 3 floats, m
    color: str                  # "green" | "red"


@dataclass(frozen=True)
class Hello:
    sid: str
    seq: int
    tick: int
    version: int
    scenario: str
    dt: float
    haptic_rate_hz: int
    autonomy: bool
    scheme: str
    feedback_visual: bool
    feedback_haptic: bool
    seed: int
    mapping_label: str
    arm_axes: tuple             # per-joint axis letters, e.g. ("Z","Y",...)
    arm_offsets: tuple          # per-joint link offsets, m


@dataclass(frozen=True)
class SceneState:
    sid: str
    seq: int
    tick: int
    q: tuple                    # 7 joint angles, rad
    ee_pos: tuple
    ee_ori: tuple               # quaternion (w, x, y, z)
    block_pos: tuple
    block_ori: tuple
    phase: str
    grasped: bool


@dataclass(frozen=True)
class Actuators:
    sid: str
    seq: int
    tick: int
    intensities: tuple          # 6 values in [0, 1]
    timestamp_ms: int


@dataclass(frozen=True)
class Arrows:
    sid: str
    seq: int
    tick: int
    glyphs: tuple               # GlyphSpec tuple, possibly empty


@dataclass(frozen=True)
class Input:
    sid: str
    seq: int
    tick: int
    axis1: float
    axis2: float
    mode_switch_pressed: bool
    grip_toggle_pressed: bool
    timestamp_ms: int


@dataclass(frozen=True)
class ModeSwitch:
    sid: str
    seq: int
    tick: int
    index: int
    label: str


@dataclass(frozen=True)
class TaskEvent:
    sid: str
    seq: int
    tick: int
    name: str


@dataclass(frozen=True)
class Metrics:
    sid: str
    seq: int
    tick: int
    scheme: str
    switch_count: int
    elapsed_s: float
    path_length_m: float
    duty_cycles: tuple          # 6 fractions in [0, 1]
    success: bool


@dataclass(frozen=True)
class Bye:
    sid: str
    seq: int
    tick: int
    reason: str


TAG_OF = {
    Hello: "hello",
    SceneState: "scene",
    Actuators: "actuators",
    Arrows: "arrows",
    Input: "input",
    ModeSwitch: "mode_switch",
    TaskEvent: "task_event",
    Metrics: "metrics",
    Bye: "bye",
}
TYPE_OF = {tag: cls for cls, tag in TAG_OF.items()}


def _need(value, kind, name):
    if kind is float:
        # JSON integers are legal spellings of float fields
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParseError(f"field {name!r} must be a number")
        value = float(value)
        if value != value or value in (float("inf"), float("-inf")):
            raise ParseError(f"field {name!r} must be finite")
        return value
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ParseError(f"field {name!r} must be an integer")
        return value
    if not isinstance(value, kind):
        raise ParseError(f"field {name!r} must be {kind.__name__}")
    return value


def _floats(value, n, name):
    if not isinstance(value, list) or len(value) != n:
        raise ParseError(f"field {name!r} must be a list of {n} numbers")
    return tuple(_need(v, float, name) for v in value)


def _encode_vec(values):
    return [float(v) for v in values]


def _payload(m):
    """Tag-specific wire fields beyond the (sid, seq, tick) envelope."""
    if isinstance(m, Hello):
        return {
            "version": int(m.version), "scenario": m.scenario,
            "dt": float(m.dt), "haptic_rate_hz": int(m.haptic_rate_hz),
            "autonomy": bool(m.autonomy), "scheme": m.scheme,
            "feedback_visual": bool(m.feedback_visual),
            "feedback_haptic": bool(m.feedback_haptic), "seed": int(m.seed),
            "mapping_label": m.mapping_label,
            "arm_axes": list(m.arm_axes),
            "arm_offsets": _encode_vec(m.arm_offsets),
        }
    if isinstance(m, SceneState):
        return {
            "q": _encode_vec(m.q), "ee_pos": _encode_vec(m.ee_pos),
            "ee_ori": _encode_vec(m.ee_ori),
            "block_pos": _encode_vec(m.block_pos),
            "block_ori": _encode_vec(m.block_ori),
            "phase": m.phase, "grasped": bool(m.grasped),
        }
    if isinstance(m, Actuators):
        return {"intensities": _encode_vec(m.intensities),
                "timestamp_ms": int(m.timestamp_ms)}
    if isinstance(m, Arrows):
        return {"glyphs": [
            {"origin": _encode_vec(g.origin), "vector": _encode_vec(g.vector),
             "color": g.color} for g in m.glyphs]}
    if isinstance(m, Input):
        return {"axis1": float(m.axis1), "axis2": float(m.axis2),
                "mode_switch_pressed": bool(m.mode_switch_pressed),
                "grip_toggle_pressed": bool(m.grip_toggle_pressed),
                "timestamp_ms": int(m.timestamp_ms)}
    if isinstance(m, ModeSwitch):
        return {"index": int(m.index), "label": m.label}
    if isinstance(m, TaskEvent):
        return {"name": m.name}
    if isinstance(m, Metrics):
        return {"scheme": m.scheme, "switch_count": int(m.switch_count),
                "elapsed_s": float(m.elapsed_s),
                "path_length_m": float(m.path_length_m),
                "duty_cycles": _encode_vec(m.duty_cycles),
                "success": bool(m.success)}
    if isinstance(m, Bye):
        return {"reason": m.reason}
    raise ParseError(f"not a protocol message: {type(m).__name__}")


def encode(m):
    """One canonical JSON line (without the trailing newline)."""
    obj = {"tag": TAG_OF[type(m)], "sid": m.sid,
           "seq": int(m.seq), "tick": int(m.tick)}
    obj.update(_payload(m))
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      allow_nan=False)


def _reject_constant(name):
    raise ParseError(f"non-finite literal {name!r} is not allowed")


def decode(line):
    """Parse one line back into a message; inverse of encode."""
    try:
        obj = json.loads(line, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed line: {exc}") from exc
    if not isinstance(obj, dict):
        raise ParseError("message line must be a JSON object")
    tag = obj.pop("tag", None)
    if tag is None:
        raise ParseError("message has no tag")
    if not isinstance(tag, str) or tag not in TYPE_OF:
        raise UnknownTag(f"unknown message tag {tag!r}")
    if tag == "hello" and "version" in obj:
        version = obj["version"]
        if version != PROTOCOL_VERSION:
            raise VersionError(
                f"protocol version {version!r}, expected {PROTOCOL_VERSION}")
    try:
        sid = _need(obj.pop("sid"), str, "sid")
        seq = _need(obj.pop("seq"), int, "seq")
        tick = _need(obj.pop("tick"), int, "tick")
        parser = _PARSERS[tag]
        message = parser(sid, seq, tick, obj)
    except KeyError as exc:
        raise ParseError(f"missing field {exc.args[0]!r}") from exc
    if obj:
        raise ParseError(f"unexpected fields {sorted(obj)} for tag {tag!r}")
    return message


def _parse_hello(sid, seq, tick, obj):
    axes = obj.pop("arm_axes")
    if (not isinstance(axes, list)
            or any(a not in ("X", "Y", "Z") for a in axes)):
        raise ParseError("arm_axes must be a list of axis letters")
    offsets = obj.pop("arm_offsets")
    if not isinstance(offsets, list) or len(offsets) != len(axes):
        raise ParseError("arm_offsets must match arm_axes in length")
    return Hello(
        sid=sid, seq=seq, tick=tick,
        version=_need(obj.pop("version"), int, "version"),
        scenario=_need(obj.pop("scenario"), str, "scenario"),
        dt=_need(obj.pop("dt"), float, "dt"),
        haptic_rate_hz=_need(obj.pop("haptic_rate_hz"), int, "haptic_rate_hz"),
        autonomy=_need(obj.pop("autonomy"), bool, "autonomy"),
        scheme=_need(obj.pop("scheme"), str, "scheme"),
        feedback_visual=_need(obj.pop("feedback_visual"), bool, "feedback_visual"),
        feedback_haptic=_need(obj.pop("feedback_haptic"), bool, "feedback_haptic"),
        seed=_need(obj.pop("seed"), int, "seed"),
        mapping_label=_need(obj.pop("mapping_label"), str, "mapping_label"),
        arm_axes=tuple(axes),
        arm_offsets=tuple(_need(v, float, "arm_offsets") for v in offsets),
    )


def _parse_scene(sid, seq, tick, obj):
    return SceneState(
        sid=sid, seq=seq, tick=tick,
        q=_floats(obj.pop("q"), 7, "q"),
        ee_pos=_floats(obj.pop("ee_pos"), 3, "ee_pos"),
        ee_ori=_floats(obj.pop("ee_ori"), 4, "ee_ori"),
        block_pos=_floats(obj.pop("block_pos"), 3, "block_pos"),
        block_ori=_floats(obj.pop("block_ori"), 4, "block_ori"),
        phase=_need(obj.pop("phase"), str, "phase"),
        grasped=_need(obj.pop("grasped"), bool, "grasped"),
    )


def _parse_actuators(sid, seq, tick, obj):
    intensities = _floats(obj.pop("intensities"), 6, "intensities")
    if any(i < 0.0 or i > 1.0 for i in intensities):
        raise ParseError("intensities must lie in [0, 1]")
    return Actuators(sid=sid, seq=seq, tick=tick, intensities=intensities,
                     timestamp_ms=_need(obj.pop("timestamp_ms"), int,
                                        "timestamp_ms"))


def _parse_arrows(sid, seq, tick, obj):
    raw = obj.pop("glyphs")
    if not isinstance(raw, list):
        raise ParseError("glyphs must be a list")
    glyphs = []
    for g in raw:
        if not isinstance(g, dict) or set(g) != {"origin", "vector", "color"}:
            raise ParseError("each glyph needs origin, vector, color")
        if g["color"] not in COLORS:
            raise ParseError(f"glyph color must be one of {COLORS}")
        glyphs.append(GlyphSpec(origin=_floats(g["origin"], 3, "origin"),
                                vector=_floats(g["vector"], 3, "vector"),
                                color=g["color"]))
    return Arrows(sid=sid, seq=seq, tick=tick, glyphs=tuple(glyphs))


def _parse_input(sid, seq, tick, obj):
    axis1 = _need(obj.pop("axis1"), float, "axis1")
    axis2 = _need(obj.pop("axis2"), float, "axis2")
    if not (-1.0 <= axis1 <= 1.0 and -1.0 <= axis2 <= 1.0):
        raise ParseError("axes must lie in [-1, 1]")
    return Input(
        sid=sid, seq=seq, tick=tick, axis1=axis1, axis2=axis2,
        mode_switch_pressed=_need(obj.pop("mode_switch_pressed"), bool,
                                  "mode_switch_pressed"),
        grip_toggle_pressed=_need(obj.pop("grip_toggle_pressed"), bool,
                                  "grip_toggle_pressed"),
        timestamp_ms=_need(obj.pop("timestamp_ms"), int, "timestamp_ms"),
    )


def _parse_mode_switch(sid, seq, tick, obj):
    index = _need(obj.pop("index"), int, "index")
    if index < 0:
        raise ParseError("index must be non-negative")
    return ModeSwitch(sid=sid, seq=seq, tick=tick, index=index,
                      label=_need(obj.pop("label"), str, "label"))


def _parse_task_event(sid, seq, tick, obj):
    return TaskEvent(sid=sid, seq=seq, tick=tick,
                     name=_need(obj.pop("name"), str, "name"))


def _parse_metrics(sid, seq, tick, obj):
    return Metrics(
        sid=sid, seq=seq, tick=tick,
        scheme=_need(obj.pop("scheme"), str, "scheme"),
        switch_count=_need(obj.pop("switch_count"), int, "switch_count"),
        elapsed_s=_need(obj.pop("elapsed_s"), float, "elapsed_s"),
        path_length_m=_need(obj.pop("path_length_m"), float, "path_length_m"),
        duty_cycles=_floats(obj.pop("duty_cycles"), 6, "duty_cycles"),
        success=_need(obj.pop("success"), bool, "success"),
    )


def _parse_bye(sid, seq, tick, obj):
    return Bye(sid=sid, seq=seq, tick=tick,
               reason=_need(obj.pop("reason"), str, "reason"))


_PARSERS = {
    "hello": _parse_hello,
    "scene": _parse_scene,
    "actuators": _parse_actuators,
    "arrows": _parse_arrows,
    "input": _parse_input,
    "mode_switch": _parse_mode_switch,
    "task_event": _parse_task_event,
    "metrics": _parse_metrics,
    "bye": _parse_bye,
}
