"""Codec tests: canonical encoding, round trips, and rejection paths."""

import json

import numpy as np
import pytest
from msggen import random_message

from cobot_intent.errors import ParseError, UnknownTag, VersionError
from cobot_intent.protocol import (
    Actuators,
    Bye,
    Hello,
    Input,
    decode,
    encode,
)


def make_hello(**overrides):
    base = dict(
        sid="abc123def456", seq=0, tick=0, version=1, scenario="default",
        dt=0.01, haptic_rate_hz=50, autonomy=True, scheme="adaptive",
        feedback_visual=True, feedback_haptic=True, seed=42,
        mapping_label="adaptive",
        arm_axes=("Z", "Y", "Z", "Y", "Z", "Y", "Z"),
        arm_offsets=(0.175, 0.175, 0.16, 0.16, 0.12, 0.12, 0.075),
    )
    base.update(overrides)
    return Hello(**base)


def test_bye_line_contains_tag_and_reason():
    line = encode(Bye(sid="s", seq=3, tick=10, reason="done"))
    assert '"tag":"bye"' in line
    assert '"reason":"done"' in line
    assert "\n" not in line


def test_actuator_line_fixed_value_order():
    m = Actuators(sid="s", seq=1, tick=0,
                  intensities=(1.0, 0.0, 0.0, 0.0, 0.0, 0.0), timestamp_ms=0)
    line = encode(m)
    assert '"intensities":[1.0,0.0,0.0,0.0,0.0,0.0]' in line


def test_canonical_reencode_is_identity():
    rng = np.random.default_rng(13)
    for _ in range(500):
        line = encode(random_message(rng))
        assert encode(decode(line)) == line


def test_round_trip_structural_equality():
    rng = np.random.default_rng(17)
    for _ in range(2000):
        m = random_message(rng)
        assert decode(encode(m)) == m


def test_hello_round_trip():
    m = make_hello()
    out = decode(encode(m))
    assert isinstance(out, Hello)
    assert out == m


def test_garbage_line_parse_error():
    with pytest.raises(ParseError):
        decode("not json at all {{{")
    with pytest.raises(ParseError):
        decode("[1, 2, 3]")
    with pytest.raises(ParseError):
        decode("")


def test_unknown_tag_rejected():
    line = json.dumps({"tag": "telemetry", "sid": "s", "seq": 0, "tick": 0})
    with pytest.raises(UnknownTag):
        decode(line)
    # UnknownTag is a parse failure too
    assert issubclass(UnknownTag, ParseError)


def test_missing_tag_rejected():
    with pytest.raises(ParseError):
        decode(json.dumps({"sid": "s", "seq": 0, "tick": 0}))


def test_hello_version_mismatch():
    obj = json.loads(encode(make_hello()))
    obj["version"] = 2
    with pytest.raises(VersionError):
        decode(json.dumps(obj))


def test_hello_missing_version_is_parse_error():
    obj = json.loads(encode(make_hello()))
    del obj["version"]
    with pytest.raises(ParseError):
        decode(json.dumps(obj))


def test_missing_field_rejected():
    obj = json.loads(encode(Bye(sid="s", seq=0, tick=0, reason="done")))
    del obj["reason"]
    with pytest.raises(ParseError):
        decode(json.dumps(obj))


def test_extra_field_rejected():
    obj = json.loads(encode(Bye(sid="s", seq=0, tick=0, reason="done")))
    obj["padding"] = 1
    with pytest.raises(ParseError):
        decode(json.dumps(obj))


def test_axis_out_of_range_rejected():
    m = Input(sid="s", seq=0, tick=0, axis1=0.0, axis2=0.0,
              mode_switch_pressed=False, grip_toggle_pressed=False,
              timestamp_ms=0)
    obj = json.loads(encode(m))
    obj["axis1"] = 1.5
    with pytest.raises(ParseError):
        decode(json.dumps(obj))


def test_intensity_out_of_range_rejected():
    m = Actuators(sid="s", seq=0, tick=0,
                  intensities=(0.5,) * 6, timestamp_ms=0)
    obj = json.loads(encode(m))
    obj["intensities"][2] = -0.1
    with pytest.raises(ParseError):
        decode(json.dumps(obj))
    obj["intensities"][2] = 1.1
    with pytest.raises(ParseError):
        decode(json.dumps(obj))


def test_wrong_vector_length_rejected():
    m = Actuators(sid="s", seq=0, tick=0,
                  intensities=(0.5,) * 6, timestamp_ms=0)
    obj = json.loads(encode(m))
    obj["intensities"] = obj["intensities"][:5]
    with pytest.raises(ParseError):
        decode(json.dumps(obj))


def test_non_finite_literal_rejected():
    line = ('{"axis1":Infinity,"axis2":0.0,"grip_toggle_pressed":false,'
            '"mode_switch_pressed":false,"seq":0,"sid":"s","tag":"input",'
            '"tick":0,"timestamp_ms":0}')
    with pytest.raises(ParseError):
        decode(line)


def test_bad_glyph_color_rejected():
    line = ('{"glyphs":[{"color":"blue","origin":[0.0,0.0,0.0],'
            '"vector":[0.1,0.0,0.0]}],"seq":0,"sid":"s","tag":"arrows","tick":0}')
    with pytest.raises(ParseError):
        decode(line)


def test_wrong_type_rejected():
    obj = json.loads(encode(Bye(sid="s", seq=0, tick=0, reason="done")))
    obj["seq"] = "zero"
    with pytest.raises(ParseError):
        decode(json.dumps(obj))
    obj = json.loads(encode(Bye(sid="s", seq=0, tick=0, reason="done")))
    obj["reason"] = 7
    with pytest.raises(ParseError):
        decode(json.dumps(obj))


def test_integer_spelling_of_float_field_accepted():
    # a hand-written client may send 0 instead of 0.0; values coerce,
    # canonical form then differs but the message is equal
    line = ('{"axis1":1,"axis2":0,"grip_toggle_pressed":false,'
            '"mode_switch_pressed":false,"seq":0,"sid":"s","tag":"input",'
            '"tick":0,"timestamp_ms":0}')
    m = decode(line)
    assert m.axis1 == 1.0 and isinstance(m.axis1, float)
