import { describe, expect, it } from "vitest";

import type { Actuators, Arrows, Msg, SceneState } from "../src/protocol.js";
import { arrowSegments, gloveIndicators, type Panel } from "../src/render.js";
import { applyAll, applyMessage, initialView } from "../src/view.js";
import { fixtureHello, fixtureMessages } from "./helpers.js";

const PANEL: Panel = { x: 0, y: 0, w: 400, h: 400, kind: "top" };

function actuatorsMsg(intensities: number[], tick = 0): Actuators {
  return {
    tag: "actuators", sid: "s", seq: 0, tick, intensities, timestamp_ms: 0,
  };
}

function arrowsMsg(glyphs: Arrows["glyphs"], tick = 0): Arrows {
  return { tag: "arrows", sid: "s", seq: 0, tick, glyphs };
}

describe("glove widget from actuator frames", () => {
  it("lights exactly one indicator for a +x-only frame", () => {
    const view = applyMessage(initialView(), actuatorsMsg([1, 0, 0, 0, 0, 0]));
    const indicators = gloveIndicators(view.intensities);
    expect(indicators.filter((i) => i.lit).length).toBe(1);
    expect(indicators[0]!.label).toBe("+X");
    expect(indicators[0]!.lit).toBe(true);
    expect(indicators[0]!.intensity).toBe(1);
  });

  it("keeps brightness proportional to intensity", () => {
    const view = applyMessage(
      initialView(), actuatorsMsg([0, 0.25, 0, 0, 0.75, 0]));
    const indicators = gloveIndicators(view.intensities);
    expect(indicators[1]!.intensity).toBe(0.25);
    expect(indicators[4]!.intensity).toBe(0.75);
    expect(indicators.filter((i) => i.lit).length).toBe(2);
  });

  it("always shows the most recent frame", () => {
    let view = applyMessage(initialView(), actuatorsMsg([1, 0, 0, 0, 0, 0], 2));
    view = applyMessage(view, actuatorsMsg([0, 0, 0.5, 0, 0, 0], 4));
    expect(view.intensities).toEqual([0, 0, 0.5, 0, 0, 0]);
  });
});

describe("arrows follow glyph messages", () => {
  const glyph = {
    origin: [0.3, 0.0, 0.2] as [number, number, number],
    vector: [0.1, 0.05, 0.0] as [number, number, number],
    color: "green" as const,
  };

  it("draws no arrows before any arrows message", () => {
    expect(arrowSegments(initialView().glyphs, PANEL)).toEqual([]);
  });

  it("draws arrows exactly while glyphs are present", () => {
    let view = applyMessage(initialView(), arrowsMsg([glyph], 2));
    expect(arrowSegments(view.glyphs, PANEL).length).toBe(1);
    // a hold is an arrows message with an empty glyph list: it erases
    view = applyMessage(view, arrowsMsg([], 4));
    expect(arrowSegments(view.glyphs, PANEL)).toEqual([]);
  });

  it("maps glyph colors 1:1 to segment colors", () => {
    const red = { ...glyph, color: "red" as const };
    const view = applyMessage(initialView(), arrowsMsg([glyph, red]));
    const segments = arrowSegments(view.glyphs, PANEL);
    expect(segments.map((s) => s.color)).toEqual(["green", "red"]);
  });
});

describe("displayed tick is monotone", () => {
  it("ignores messages older than the newest applied tick", () => {
    let view = applyMessage(initialView(), actuatorsMsg([0, 1, 0, 0, 0, 0], 10));
    expect(view.tick).toBe(10);
    const stale = actuatorsMsg([1, 0, 0, 0, 0, 0], 5);
    view = applyMessage(view, stale);
    expect(view.tick).toBe(10);
    expect(view.intensities).toEqual([0, 1, 0, 0, 0, 0]);
  });

  it("never decreases across a whole recorded session", () => {
    let view = initialView();
    let last = 0;
    for (const msg of fixtureMessages()) {
      view = applyMessage(view, msg);
      expect(view.tick).toBeGreaterThanOrEqual(last);
      last = view.tick;
    }
  });
});

describe("replaying the recorded log through the reducer", () => {
  it("ends in the session's final state", () => {
    const msgs = fixtureMessages();
    const view = applyAll(initialView(), msgs);
    expect(view.hello).not.toBeNull();
    expect(view.scene).not.toBeNull();
    expect(view.metrics).not.toBeNull();
    expect(view.byeReason).not.toBeNull();
    expect(view.tick).toBe(msgs[msgs.length - 1]!.tick);
    // the fixture run was truncated by its time budget
    expect(view.metrics!.success).toBe(false);
    expect(view.switchCount).toBe(0);
  });

  it("tracks the grasp through the scene mirror", () => {
    let view = initialView();
    let sawGrasp = false;
    for (const msg of fixtureMessages()) {
      view = applyMessage(view, msg);
      if (view.scene !== null && view.scene.grasped) {
        sawGrasp = true;
        // stateless mirror: the streamed block rides with the EE
        const scene = view.scene;
        const d = Math.hypot(
          scene.block_pos[0] - scene.ee_pos[0],
          scene.block_pos[1] - scene.ee_pos[1],
          scene.block_pos[2] - scene.ee_pos[2]);
        expect(d).toBeLessThan(0.1);
      }
    }
    expect(sawGrasp).toBe(true);
  });

  it("shows holds as glyph-free stretches", () => {
    let view = initialView();
    let sawHold = false;
    let sawArrows = false;
    for (const msg of fixtureMessages()) {
      view = applyMessage(view, msg);
      if (msg.tag === "arrows") {
        if (msg.glyphs.length === 0) {
          sawHold = true;
          expect(arrowSegments(view.glyphs, PANEL)).toEqual([]);
        } else {
          sawArrows = true;
          expect(arrowSegments(view.glyphs, PANEL).length)
            .toBe(msg.glyphs.length);
        }
      }
    }
    expect(sawHold).toBe(true);
    expect(sawArrows).toBe(true);
  });

  it("flags no model mismatch for the service's own stream", () => {
    const view = applyAll(initialView(), fixtureMessages());
    expect(view.modelMismatch).toBe(false);
  });
});

describe("remaining message kinds", () => {
  it("updates mapping label and switch count on mode_switch", () => {
    let view = applyMessage(initialView(), fixtureHello() as Msg);
    const before = view.mappingLabel;
    expect(before).not.toBe("");
    view = applyMessage(view, {
      tag: "mode_switch", sid: "s", seq: 1, tick: 3, index: 1, label: "yz",
    });
    expect(view.mappingLabel).toBe("yz");
    expect(view.switchCount).toBe(1);
    view = applyMessage(view, {
      tag: "mode_switch", sid: "s", seq: 2, tick: 6, index: 0, label: "xy",
    });
    expect(view.switchCount).toBe(2);
  });

  it("records task events and input echoes", () => {
    let view = applyMessage(initialView(), {
      tag: "task_event", sid: "s", seq: 0, tick: 1, name: "grasped",
    });
    expect(view.lastEvent).toBe("grasped");
    view = applyMessage(view, {
      tag: "input", sid: "s", seq: 1, tick: 2, axis1: -1, axis2: 0.5,
      mode_switch_pressed: false, grip_toggle_pressed: false, timestamp_ms: 0,
    });
    expect(view.lastInput).toEqual({ axis1: -1, axis2: 0.5 });
  });

  it("detects a model mismatch on a corrupted scene", () => {
    let view = applyMessage(initialView(), fixtureHello() as Msg);
    const scene = fixtureMessages()
      .find((m): m is SceneState => m.tag === "scene")!;
    const wrong: SceneState = {
      ...scene,
      ee_pos: [scene.ee_pos[0] + 0.2, scene.ee_pos[1], scene.ee_pos[2]],
    };
    view = applyMessage(view, wrong);
    expect(view.modelMismatch).toBe(true);
  });
});
