/**
 * Canvas renderer: three scene panels (top view, side view, simple
 * perspective), a glove widget with six intensity indicators, and a
 * HUD line. Everything drawn comes straight out of the ViewState; the
 * geometry helpers are pure so tests can check what would be drawn
 * without a canvas.
 */

import { chainPoints } from "./kinematics.js";
import type { GlyphSpec, Vec3 } from "./protocol.js";
import type { ViewState } from "./view.js";

// actuator channel order on the wire: pairs along +x,-x,+y,-y,+z,-z
export const GLOVE_LABELS = ["+X", "-X", "+Y", "-Y", "+Z", "-Z"] as const;

export interface Indicator {
  label: string;
  intensity: number;
  lit: boolean;
}

/** Widget model: one indicator per actuator, brightness = intensity. */
export function gloveIndicators(intensities: number[]): Indicator[] {
  return GLOVE_LABELS.map((label, i) => {
    const intensity = intensities[i] ?? 0;
    return { label, intensity, lit: intensity > 0 };
  });
}

// Static geometry of the scenario the service ships. The wire carries
// only dynamic state, so the target disc and keep-out ring are drawn
// for the known scenario and omitted (placeholder note) otherwise.
export const DEFAULT_SCENE = {
  scenario: "default",
  tableBounds: [-0.8, 0.8, -0.8, 0.8] as const, // xmin, xmax, ymin, ymax
  targetCenter: [0.36, 0.24, 0.0] as Vec3,
  targetRadius: 0.02,
  keepOutRadius: 0.12,
  blockSide: 0.04,
};

export function sceneGeometry(scenario: string | null) {
  return scenario === DEFAULT_SCENE.scenario ? DEFAULT_SCENE : null;
}

export interface Panel {
  x: number;                    // canvas-space origin of the panel
  y: number;
  w: number;
  h: number;
  kind: "top" | "side" | "persp";
}

export interface Pt {
  x: number;
  y: number;
}

// world window covered by the orthographic panels, meters
const WORLD_HALF = 1.0;
const SIDE_Z_MAX = 1.1;
const SIDE_Z_MIN = -0.1;

// simple perspective camera: above and to the front-right of the base
const CAM_EYE: Vec3 = [1.9, -1.45, 1.25];
const CAM_TARGET: Vec3 = [0.0, 0.0, 0.2];
const CAM_FOCAL = 2.1;

function sub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

function cross(a: Vec3, b: Vec3): Vec3 {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

function normalize(v: Vec3): Vec3 {
  const n = Math.hypot(v[0], v[1], v[2]);
  return [v[0] / n, v[1] / n, v[2] / n];
}

function dot(a: Vec3, b: Vec3): number {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

const CAM_FORWARD = normalize(sub(CAM_TARGET, CAM_EYE));
const CAM_RIGHT = normalize(cross(CAM_FORWARD, [0, 0, 1]));
const CAM_UP = cross(CAM_RIGHT, CAM_FORWARD);

/** Project a world point into panel pixel coordinates. */
export function project(p: Vec3, panel: Panel): Pt {
  if (panel.kind === "top") {
    // x right, y up on screen
    const sx = panel.x + ((p[0] + WORLD_HALF) / (2 * WORLD_HALF)) * panel.w;
    const sy = panel.y + ((WORLD_HALF - p[1]) / (2 * WORLD_HALF)) * panel.h;
    return { x: sx, y: sy };
  }
  if (panel.kind === "side") {
    // x right, z up on screen
    const sx = panel.x + ((p[0] + WORLD_HALF) / (2 * WORLD_HALF)) * panel.w;
    const sy = panel.y
      + ((SIDE_Z_MAX - p[2]) / (SIDE_Z_MAX - SIDE_Z_MIN)) * panel.h;
    return { x: sx, y: sy };
  }
  const d = sub(p, CAM_EYE);
  const depth = dot(d, CAM_FORWARD);
  const xc = (dot(d, CAM_RIGHT) / depth) * CAM_FOCAL;
  const yc = (dot(d, CAM_UP) / depth) * CAM_FOCAL;
  return {
    x: panel.x + panel.w / 2 + (xc * panel.w) / 2,
    y: panel.y + panel.h / 2 - (yc * panel.h) / 2,
  };
}

export interface ArrowSegment {
  from: Pt;
  to: Pt;
  color: "green" | "red";
}

/**
 * Screen-space arrow segments for one panel. Empty exactly when the
 * view holds no glyphs, so a hold frame erases all arrows.
 */
export function arrowSegments(glyphs: GlyphSpec[], panel: Panel): ArrowSegment[] {
  return glyphs.map((g) => {
    const tip: Vec3 = [
      g.origin[0] + g.vector[0],
      g.origin[1] + g.vector[1],
      g.origin[2] + g.vector[2],
    ];
    return {
      from: project(g.origin, panel),
      to: project(tip, panel),
      color: g.color,
    };
  });
}

const COLORS = {
  background: "#10151c",
  panel: "#161d27",
  grid: "#23303f",
  table: "#1e2a38",
  text: "#c8d4e0",
  dim: "#6b7a8a",
  arm: "#9fb4c8",
  joint: "#d7e3ee",
  block: "#3b82f6",
  blockGrasped: "#93c5fd",
  target: "#ef4444",
  keepout: "#7a4a2a",
  green: "#34d399",
  red: "#f87171",
  warn: "#fbbf24",
};

function panelLayout(w: number, h: number): Panel[] {
  const hudH = Math.max(120, h * 0.22);
  const ph = h - hudH;
  const pw = w / 3;
  return [
    { x: 0, y: 0, w: pw, h: ph, kind: "top" },
    { x: pw, y: 0, w: pw, h: ph, kind: "side" },
    { x: 2 * pw, y: 0, w: pw, h: ph, kind: "persp" },
  ];
}

type Ctx = CanvasRenderingContext2D;

function line(ctx: Ctx, a: Pt, b: Pt): void {
  ctx.beginPath();
  ctx.moveTo(a.x, a.y);
  ctx.lineTo(b.x, b.y);
  ctx.stroke();
}

function polyline(ctx: Ctx, pts: Pt[]): void {
  if (pts.length < 2) {
    return;
  }
  ctx.beginPath();
  ctx.moveTo(pts[0]!.x, pts[0]!.y);
  for (const p of pts.slice(1)) {
    ctx.lineTo(p.x, p.y);
  }
  ctx.stroke();
}

function circle(ctx: Ctx, c: Pt, r: number, fill: boolean): void {
  ctx.beginPath();
  ctx.arc(c.x, c.y, r, 0, 2 * Math.PI);
  if (fill) {
    ctx.fill();
  } else {
    ctx.stroke();
  }
}

function worldCircle(ctx: Ctx, center: Vec3, radius: number, panel: Panel,
                     segments = 48): void {
  ctx.beginPath();
  for (let i = 0; i <= segments; i += 1) {
    const a = (2 * Math.PI * i) / segments;
    const p = project(
      [center[0] + radius * Math.cos(a), center[1] + radius * Math.sin(a),
       center[2]],
      panel);
    if (i === 0) {
      ctx.moveTo(p.x, p.y);
    } else {
      ctx.lineTo(p.x, p.y);
    }
  }
  ctx.stroke();
}

function drawArrowhead(ctx: Ctx, from: Pt, to: Pt): void {
  const dx = to.x - from.x;
  const dy = to.y - from.y;
  const len = Math.hypot(dx, dy);
  if (len < 1e-6) {
    return;
  }
  const ux = dx / len;
  const uy = dy / len;
  const size = Math.min(9, len * 0.4);
  ctx.beginPath();
  ctx.moveTo(to.x, to.y);
  ctx.lineTo(to.x - size * (ux * 0.9 - uy * 0.45),
             to.y - size * (uy * 0.9 + ux * 0.45));
  ctx.lineTo(to.x - size * (ux * 0.9 + uy * 0.45),
             to.y - size * (uy * 0.9 - ux * 0.45));
  ctx.closePath();
  ctx.fill();
}

function drawTable(ctx: Ctx, panel: Panel): void {
  const [xmin, xmax, ymin, ymax] = DEFAULT_SCENE.tableBounds;
  const corners: Vec3[] = [
    [xmin, ymin, 0], [xmax, ymin, 0], [xmax, ymax, 0], [xmin, ymax, 0],
  ];
  const pts = corners.map((c) => project(c, panel));
  ctx.fillStyle = COLORS.table;
  ctx.beginPath();
  ctx.moveTo(pts[0]!.x, pts[0]!.y);
  for (const p of pts.slice(1)) {
    ctx.lineTo(p.x, p.y);
  }
  ctx.closePath();
  ctx.fill();
  ctx.strokeStyle = COLORS.grid;
  ctx.lineWidth = 1;
  ctx.stroke();
}

function drawScenePanel(ctx: Ctx, view: ViewState, panel: Panel): void {
  ctx.save();
  ctx.beginPath();
  ctx.rect(panel.x, panel.y, panel.w, panel.h);
  ctx.clip();
  ctx.fillStyle = COLORS.panel;
  ctx.fillRect(panel.x, panel.y, panel.w, panel.h);

  if (panel.kind === "side") {
    // table edge seen from the side
    ctx.strokeStyle = COLORS.grid;
    ctx.lineWidth = 1;
    line(ctx, project([-WORLD_HALF, 0, 0], panel),
         project([WORLD_HALF, 0, 0], panel));
  } else {
    drawTable(ctx, panel);
  }

  const geometry = sceneGeometry(view.hello ? view.hello.scenario : null);
  if (geometry !== null && panel.kind !== "side") {
    ctx.strokeStyle = COLORS.keepout;
    ctx.lineWidth = 1;
    worldCircle(ctx, [0, 0, 0], geometry.keepOutRadius, panel);
    ctx.strokeStyle = COLORS.target;
    ctx.lineWidth = 2;
    worldCircle(ctx, geometry.targetCenter, geometry.targetRadius, panel);
    worldCircle(ctx, geometry.targetCenter, geometry.targetRadius * 2.5, panel);
  }

  if (view.scene !== null) {
    const scene = view.scene;
    // block: a square of the default side length at the streamed pose
    const half = DEFAULT_SCENE.blockSide / 2;
    const c = scene.block_pos;
    const cornersTop: Vec3[] = [
      [c[0] - half, c[1] - half, c[2]], [c[0] + half, c[1] - half, c[2]],
      [c[0] + half, c[1] + half, c[2]], [c[0] - half, c[1] + half, c[2]],
    ];
    const pts = cornersTop.map((p) => project(p, panel));
    ctx.fillStyle = scene.grasped ? COLORS.blockGrasped : COLORS.block;
    ctx.beginPath();
    ctx.moveTo(pts[0]!.x, pts[0]!.y);
    for (const p of pts.slice(1)) {
      ctx.lineTo(p.x, p.y);
    }
    ctx.closePath();
    ctx.fill();

    if (view.hello !== null) {
      const chain = chainPoints(view.hello, scene.q);
      const screen = chain.map((p) => project(p, panel));
      ctx.strokeStyle = COLORS.arm;
      ctx.lineWidth = 3;
      ctx.lineJoin = "round";
      polyline(ctx, screen);
      ctx.fillStyle = COLORS.joint;
      for (const p of screen) {
        circle(ctx, p, 2.5, true);
      }
      const ee = screen[screen.length - 1]!;
      ctx.strokeStyle = scene.grasped ? COLORS.blockGrasped : COLORS.joint;
      ctx.lineWidth = 1.5;
      circle(ctx, ee, 5, false);
    }
  }

  for (const seg of arrowSegments(view.glyphs, panel)) {
    const color = seg.color === "green" ? COLORS.green : COLORS.red;
    ctx.strokeStyle = color;
    ctx.fillStyle = color;
    ctx.lineWidth = 2;
    line(ctx, seg.from, seg.to);
    drawArrowhead(ctx, seg.from, seg.to);
  }

  ctx.fillStyle = COLORS.dim;
  ctx.font = "11px system-ui, sans-serif";
  const label = panel.kind === "top" ? "top (x-y)"
    : panel.kind === "side" ? "side (x-z)" : "3d";
  ctx.fillText(label, panel.x + 8, panel.y + 16);

  if (view.scene === null) {
    ctx.fillStyle = COLORS.dim;
    ctx.font = "13px system-ui, sans-serif";
    ctx.fillText("waiting for scene data", panel.x + panel.w / 2 - 60,
                 panel.y + panel.h / 2);
  }
  ctx.restore();
}

function drawGlove(ctx: Ctx, view: ViewState, x: number, y: number,
                   w: number): void {
  const indicators = gloveIndicators(view.intensities);
  const r = 13;
  const gap = Math.min(64, (w - 2 * r) / Math.max(1, indicators.length - 1));
  ctx.font = "11px system-ui, sans-serif";
  indicators.forEach((ind, i) => {
    const cx = x + r + i * gap;
    const cy = y;
    // brightness proportional to intensity
    const alpha = ind.intensity;
    ctx.fillStyle = `rgba(52, 211, 153, ${alpha.toFixed(3)})`;
    circle(ctx, { x: cx, y: cy }, r, true);
    ctx.strokeStyle = ind.lit ? COLORS.green : COLORS.grid;
    ctx.lineWidth = ind.lit ? 2 : 1;
    circle(ctx, { x: cx, y: cy }, r, false);
    ctx.fillStyle = COLORS.text;
    ctx.fillText(ind.label, cx - 8, cy + r + 14);
  });
}

function hudLines(view: ViewState): string[] {
  const phase = view.scene !== null ? view.scene.phase : "-";
  const grasped = view.scene !== null && view.scene.grasped ? " (grasped)" : "";
  const lines = [
    `phase ${phase}${grasped}   mapping ${view.mappingLabel || "-"}   `
      + `switches ${view.switchCount}   tick ${view.tick}`,
  ];
  if (view.hello !== null) {
    lines.push(
      `scenario ${view.hello.scenario}   scheme ${view.hello.scheme}   `
        + `${view.hello.autonomy ? "autonomy" : "manual"}   session ${view.hello.sid}`);
  }
  if (view.lastInput !== null) {
    lines.push(`input axes (${view.lastInput.axis1.toFixed(2)}, `
      + `${view.lastInput.axis2.toFixed(2)})`);
  }
  if (view.metrics !== null) {
    const m = view.metrics;
    lines.push(
      `result: ${m.success ? "success" : "failed"}   elapsed ${m.elapsed_s.toFixed(2)} s   `
        + `path ${m.path_length_m.toFixed(3)} m   switches ${m.switch_count}`);
  }
  if (view.byeReason !== null) {
    lines.push(`session closed: ${view.byeReason}`);
  }
  if (view.hello !== null && sceneGeometry(view.hello.scenario) === null) {
    lines.push("custom scenario: target/keep-out geometry not drawn");
  }
  if (view.modelMismatch) {
    lines.push("warning: local arm model disagrees with streamed EE pose");
  }
  return lines;
}

/** Draw the whole frame; missing data degrades to placeholders. */
export function drawView(ctx: Ctx, view: ViewState, w: number, h: number): void {
  ctx.fillStyle = COLORS.background;
  ctx.fillRect(0, 0, w, h);
  const panels = panelLayout(w, h);
  for (const panel of panels) {
    drawScenePanel(ctx, view, panel);
    ctx.strokeStyle = COLORS.grid;
    ctx.lineWidth = 1;
    ctx.strokeRect(panel.x + 0.5, panel.y + 0.5, panel.w - 1, panel.h - 1);
  }

  const hudTop = panels[0]!.h;
  drawGlove(ctx, view, 16, hudTop + 28, Math.min(w * 0.4, 400));

  ctx.fillStyle = COLORS.text;
  ctx.font = "12px ui-monospace, monospace";
  const textX = Math.min(w * 0.45, 440);
  let textY = hudTop + 22;
  for (const lineText of hudLines(view)) {
    ctx.fillText(lineText, textX, textY);
    textY += 17;
  }

  const status = view.status;
  ctx.fillStyle = status === "connected" ? COLORS.green
    : status === "connecting" ? COLORS.warn : COLORS.red;
  circle(ctx, { x: w - 18, y: hudTop + 18 }, 5, true);
  ctx.fillStyle = COLORS.dim;
  ctx.font = "11px system-ui, sans-serif";
  const statusText = status === "version-mismatch" ? "version mismatch" : status;
  ctx.fillText(statusText, w - 30 - 6 * statusText.length, hudTop + 22);
}
