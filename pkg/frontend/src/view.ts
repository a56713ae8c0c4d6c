/**
 * View state reducer. The client is a stateless mirror of the message
 * stream: every piece of rendered state is the latest value seen on the
 * wire, reduced through applyMessage. No prediction, no interpolation.
 *
 * The displayed tick never decreases. A message older than the newest
 * tick already applied is dropped, so replays that attach mid-history
 * and out-of-order delivery cannot make the view run backwards.
 */

import { EE_MISMATCH_WARN_M, eeMismatch } from "./kinematics.js";
import type {
  GlyphSpec,
  Hello,
  Metrics,
  Msg,
  SceneState,
} from "./protocol.js";

export type ConnectionStatus =
  | "connecting"
  | "connected"
  | "disconnected"
  | "version-mismatch";

export interface ViewState {
  status: ConnectionStatus;
  hello: Hello | null;
  scene: SceneState | null;
  glyphs: GlyphSpec[];
  intensities: number[];        // 6 actuator channels, zeros before data
  mappingLabel: string;
  switchCount: number;
  lastEvent: string;
  lastInput: { axis1: number; axis2: number } | null;
  metrics: Metrics | null;
  byeReason: string | null;
  tick: number;                 // newest tick applied, never decreases
  modelMismatch: boolean;       // local FK disagrees with streamed EE
  banner: string | null;        // blocking error text, e.g. version mismatch
}

export function initialView(): ViewState {
  return {
    status: "connecting",
    hello: null,
    scene: null,
    glyphs: [],
    intensities: [0, 0, 0, 0, 0, 0],
    mappingLabel: "",
    switchCount: 0,
    lastEvent: "",
    lastInput: null,
    metrics: null,
    byeReason: null,
    tick: 0,
    modelMismatch: false,
    banner: null,
  };
}

/** Reduce one message into the view; stale ticks leave it untouched. */
export function applyMessage(view: ViewState, msg: Msg): ViewState {
  if (msg.tick < view.tick) {
    return view;
  }
  const next: ViewState = { ...view, tick: msg.tick };
  switch (msg.tag) {
    case "hello":
      next.hello = msg;
      next.mappingLabel = msg.mapping_label;
      break;
    case "scene":
      next.scene = msg;
      if (next.hello !== null) {
        next.modelMismatch =
          eeMismatch(next.hello, msg.q, msg.ee_pos) > EE_MISMATCH_WARN_M;
      }
      break;
    case "actuators":
      next.intensities = msg.intensities;
      break;
    case "arrows":
      // an empty glyph list is a hold: it clears any arrows on screen
      next.glyphs = msg.glyphs;
      break;
    case "input":
      next.lastInput = { axis1: msg.axis1, axis2: msg.axis2 };
      break;
    case "mode_switch":
      next.mappingLabel = msg.label;
      next.switchCount = view.switchCount + 1;
      break;
    case "task_event":
      next.lastEvent = msg.name;
      break;
    case "metrics":
      next.metrics = msg;
      break;
    case "bye":
      next.byeReason = msg.reason;
      break;
  }
  return next;
}

/** Reduce a batch (one animation frame's inbox) in arrival order. */
export function applyAll(view: ViewState, msgs: Msg[]): ViewState {
  let state = view;
  for (const m of msgs) {
    state = applyMessage(state, m);
  }
  return state;
}
