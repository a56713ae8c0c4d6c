/**
 * Line-delimited session protocol, client side. One JSON object per
 * line, nine message variants discriminated by a `tag` field. decode()
 * mirrors the service's strictness: unknown tags, missing fields, and
 * leftover fields are all rejected, so a line that parses here is one
 * the service could have produced.
 */

export const PROTOCOL_VERSION = 1;

export class ParseError extends Error {}
export class UnknownTag extends ParseError {}
export class VersionError extends Error {}

export type Vec3 = [number, number, number];
export type Quat = [number, number, number, number]; // (w, x, y, z)

export interface GlyphSpec {
  origin: Vec3;
  vector: Vec3;
  color: "green" | "red";
}

export interface Hello {
  tag: "hello";
  sid: string;
  seq: number;
  tick: number;
  version: number;
  scenario: string;
  dt: number;
  haptic_rate_hz: number;
  autonomy: boolean;
  scheme: string;
  feedback_visual: boolean;
  feedback_haptic: boolean;
  seed: number;
  mapping_label: string;
  arm_axes: ("X" | "Y" | "Z")[];
  arm_offsets: number[];
}

export interface SceneState {
  tag: "scene";
  sid: string;
  seq: number;
  tick: number;
  q: number[];                  // 7 joint angles, rad
  ee_pos: Vec3;
  ee_ori: Quat;
  block_pos: Vec3;
  block_ori: Quat;
  phase: string;
  grasped: boolean;
}

export interface Actuators {
  tag: "actuators";
  sid: string;
  seq: number;
  tick: number;
  intensities: number[];        // 6 values in [0, 1]
  timestamp_ms: number;
}

export interface Arrows {
  tag: "arrows";
  sid: string;
  seq: number;
  tick: number;
  glyphs: GlyphSpec[];          // possibly empty
}

export interface Input {
  tag: "input";
  sid: string;
  seq: number;
  tick: number;
  axis1: number;
  axis2: number;
  mode_switch_pressed: boolean;
  grip_toggle_pressed: boolean;
  timestamp_ms: number;
}

export interface ModeSwitch {
  tag: "mode_switch";
  sid: string;
  seq: number;
  tick: number;
  index: number;
  label: string;
}

export interface TaskEvent {
  tag: "task_event";
  sid: string;
  seq: number;
  tick: number;
  name: string;
}

export interface Metrics {
  tag: "metrics";
  sid: string;
  seq: number;
  tick: number;
  scheme: string;
  switch_count: number;
  elapsed_s: number;
  path_length_m: number;
  duty_cycles: number[];        // 6 fractions in [0, 1]
  success: boolean;
}

export interface Bye {
  tag: "bye";
  sid: string;
  seq: number;
  tick: number;
  reason: string;
}

export type Msg =
  | Hello
  | SceneState
  | Actuators
  | Arrows
  | Input
  | ModeSwitch
  | TaskEvent
  | Metrics
  | Bye;

const TAGS = new Set([
  "hello", "scene", "actuators", "arrows", "input",
  "mode_switch", "task_event", "metrics", "bye",
]);

type Raw = Record<string, unknown>;

function take(obj: Raw, name: string): unknown {
  if (!(name in obj)) {
    throw new ParseError(`missing field '${name}'`);
  }
  const value = obj[name];
  delete obj[name];
  return value;
}

function num(obj: Raw, name: string): number {
  const value = take(obj, name);
  if (typeof value !== "number" || !Number.isFinite(value)) {
    throw new ParseError(`field '${name}' must be a finite number`);
  }
  return value;
}

function int(obj: Raw, name: string): number {
  const value = num(obj, name);
  if (!Number.isInteger(value)) {
    throw new ParseError(`field '${name}' must be an integer`);
  }
  return value;
}

function str(obj: Raw, name: string): string {
  const value = take(obj, name);
  if (typeof value !== "string") {
    throw new ParseError(`field '${name}' must be a string`);
  }
  return value;
}

function bool(obj: Raw, name: string): boolean {
  const value = take(obj, name);
  if (typeof value !== "boolean") {
    throw new ParseError(`field '${name}' must be a boolean`);
  }
  return value;
}

function floats(obj: Raw, name: string, n: number): number[] {
  const value = take(obj, name);
  if (!Array.isArray(value) || value.length !== n) {
    throw new ParseError(`field '${name}' must be a list of ${n} numbers`);
  }
  for (const v of value) {
    if (typeof v !== "number" || !Number.isFinite(v)) {
      throw new ParseError(`field '${name}' must be a list of ${n} numbers`);
    }
  }
  return value as number[];
}

function vec3(obj: Raw, name: string): Vec3 {
  return floats(obj, name, 3) as Vec3;
}

function quat(obj: Raw, name: string): Quat {
  return floats(obj, name, 4) as Quat;
}

function rejectLeftovers(obj: Raw, tag: string): void {
  const extra = Object.keys(obj);
  if (extra.length > 0) {
    throw new ParseError(
      `unexpected fields [${extra.sort().join(", ")}] for tag '${tag}'`);
  }
}

/** Parse one log or socket line back into a typed message. */
export function decode(line: string): Msg {
  let parsed: unknown;
  try {
    parsed = JSON.parse(line);
  } catch (err) {
    throw new ParseError(`malformed line: ${String(err)}`);
  }
  if (typeof parsed !== "object" || parsed === null || Array.isArray(parsed)) {
    throw new ParseError("message line must be a JSON object");
  }
  const obj = { ...(parsed as Raw) };
  const tag = take(obj, "tag");
  if (typeof tag !== "string" || !TAGS.has(tag)) {
    throw new UnknownTag(`unknown message tag '${String(tag)}'`);
  }
  if (tag === "hello" && "version" in obj && obj.version !== PROTOCOL_VERSION) {
    throw new VersionError(
      `protocol version ${String(obj.version)}, expected ${PROTOCOL_VERSION}`);
  }
  const sid = str(obj, "sid");
  const seq = int(obj, "seq");
  const tick = int(obj, "tick");
  const msg = parseBody(tag, sid, seq, tick, obj);
  rejectLeftovers(obj, tag);
  return msg;
}

function parseBody(
  tag: string, sid: string, seq: number, tick: number, obj: Raw,
): Msg {
  switch (tag) {
    case "hello":
      return parseHello(sid, seq, tick, obj);
    case "scene":
      return {
        tag, sid, seq, tick,
        q: floats(obj, "q", 7),
        ee_pos: vec3(obj, "ee_pos"),
        ee_ori: quat(obj, "ee_ori"),
        block_pos: vec3(obj, "block_pos"),
        block_ori: quat(obj, "block_ori"),
        phase: str(obj, "phase"),
        grasped: bool(obj, "grasped"),
      };
    case "actuators": {
      const intensities = floats(obj, "intensities", 6);
      if (intensities.some((i) => i < 0 || i > 1)) {
        throw new ParseError("intensities must lie in [0, 1]");
      }
      return {
        tag, sid, seq, tick, intensities,
        timestamp_ms: int(obj, "timestamp_ms"),
      };
    }
    case "arrows":
      return { tag, sid, seq, tick, glyphs: parseGlyphs(obj) };
    case "input": {
      const axis1 = num(obj, "axis1");
      const axis2 = num(obj, "axis2");
      if (Math.abs(axis1) > 1 || Math.abs(axis2) > 1) {
        throw new ParseError("axes must lie in [-1, 1]");
      }
      return {
        tag, sid, seq, tick, axis1, axis2,
        mode_switch_pressed: bool(obj, "mode_switch_pressed"),
        grip_toggle_pressed: bool(obj, "grip_toggle_pressed"),
        timestamp_ms: int(obj, "timestamp_ms"),
      };
    }
    case "mode_switch": {
      const index = int(obj, "index");
      if (index < 0) {
        throw new ParseError("index must be non-negative");
      }
      return { tag, sid, seq, tick, index, label: str(obj, "label") };
    }
    case "task_event":
      return { tag, sid, seq, tick, name: str(obj, "name") };
    case "metrics":
      return {
        tag, sid, seq, tick,
        scheme: str(obj, "scheme"),
        switch_count: int(obj, "switch_count"),
        elapsed_s: num(obj, "elapsed_s"),
        path_length_m: num(obj, "path_length_m"),
        duty_cycles: floats(obj, "duty_cycles", 6),
        success: bool(obj, "success"),
      };
    case "bye":
      return { tag, sid, seq, tick, reason: str(obj, "reason") };
    default:
      throw new UnknownTag(`unknown message tag '${tag}'`);
  }
}

function parseHello(
  sid: string, seq: number, tick: number, obj: Raw,
): Hello {
  const axesRaw = take(obj, "arm_axes");
  if (!Array.isArray(axesRaw)
      || axesRaw.some((a) => a !== "X" && a !== "Y" && a !== "Z")) {
    throw new ParseError("arm_axes must be a list of axis letters");
  }
  const axes = axesRaw as ("X" | "Y" | "Z")[];
  const offsets = floats(obj, "arm_offsets", axes.length);
  return {
    tag: "hello", sid, seq, tick,
    version: int(obj, "version"),
    scenario: str(obj, "scenario"),
    dt: num(obj, "dt"),
    haptic_rate_hz: int(obj, "haptic_rate_hz"),
    autonomy: bool(obj, "autonomy"),
    scheme: str(obj, "scheme"),
    feedback_visual: bool(obj, "feedback_visual"),
    feedback_haptic: bool(obj, "feedback_haptic"),
    seed: int(obj, "seed"),
    mapping_label: str(obj, "mapping_label"),
    arm_axes: axes,
    arm_offsets: offsets,
  };
}

function parseGlyphs(obj: Raw): GlyphSpec[] {
  const raw = take(obj, "glyphs");
  if (!Array.isArray(raw)) {
    throw new ParseError("glyphs must be a list");
  }
  return raw.map((g) => {
    if (typeof g !== "object" || g === null) {
      throw new ParseError("each glyph needs origin, vector, color");
    }
    const keys = Object.keys(g).sort();
    if (keys.join(",") !== "color,origin,vector") {
      throw new ParseError("each glyph needs origin, vector, color");
    }
    const spec = { ...(g as Raw) };
    const color = spec.color;
    if (color !== "green" && color !== "red") {
      throw new ParseError("glyph color must be green or red");
    }
    return {
      origin: vec3(spec, "origin"),
      vector: vec3(spec, "vector"),
      color,
    };
  });
}

/**
 * Encode an outbound input sample. The service rejects messages with
 * unexpected fields, so the key set here must stay exactly this.
 */
export function encodeInput(m: Omit<Input, "tag">): string {
  return JSON.stringify({
    tag: "input",
    sid: m.sid,
    seq: m.seq,
    tick: m.tick,
    axis1: m.axis1,
    axis2: m.axis2,
    mode_switch_pressed: m.mode_switch_pressed,
    grip_toggle_pressed: m.grip_toggle_pressed,
    timestamp_ms: m.timestamp_ms,
  });
}
