/**
 * Browser entry point. Owns the WebSocket, the inbox, the render loop,
 * and the input timer; all state transitions go through the pure view
 * reducer. Network events only append to the inbox; the inbox is
 * drained once per animation frame.
 */

import { KeyboardSampler, SAMPLE_HZ } from "./input.js";
import { decode, encodeInput, VersionError, type Msg } from "./protocol.js";
import { drawView } from "./render.js";
import { applyAll, initialView, type ViewState } from "./view.js";

const RECONNECT_MIN_MS = 500;
const RECONNECT_MAX_MS = 8000;

const canvas = document.getElementById("view") as HTMLCanvasElement;
const banner = document.getElementById("banner") as HTMLDivElement;
const ctx = canvas.getContext("2d")!;

let view: ViewState = initialView();
let inbox: Msg[] = [];
let socket: WebSocket | null = null;
let reconnectDelay = RECONNECT_MIN_MS;
let blocked = false;            // version mismatch: stop for good
let seq = 0;
const sampler = new KeyboardSampler();

function setBanner(text: string | null): void {
  banner.textContent = text ?? "";
  banner.style.display = text === null ? "none" : "block";
}

function wsUrl(): string {
  const scheme = location.protocol === "https:" ? "wss" : "ws";
  return `${scheme}://${location.host}/`;
}

function connect(): void {
  if (blocked) {
    return;
  }
  view = { ...view, status: "connecting" };
  const ws = new WebSocket(wsUrl());
  socket = ws;

  ws.onopen = () => {
    reconnectDelay = RECONNECT_MIN_MS;
    view = { ...view, status: "connected" };
  };

  ws.onmessage = (event) => {
    if (blocked || typeof event.data !== "string") {
      return;
    }
    // socket messages may batch several newline-framed lines
    for (const line of event.data.split("\n")) {
      if (line.trim() === "") {
        continue;
      }
      try {
        inbox.push(decode(line));
      } catch (err) {
        if (err instanceof VersionError) {
          blocked = true;
          view = { ...view, status: "version-mismatch", banner: String(err) };
          setBanner(`protocol version mismatch - ${err.message}`);
          ws.close();
          return;
        }
        console.warn("dropped undecodable line:", err);
      }
    }
  };

  ws.onclose = () => {
    if (socket !== ws) {
      return;
    }
    socket = null;
    if (!blocked) {
      view = { ...view, status: "disconnected" };
      setTimeout(connect, reconnectDelay);
      reconnectDelay = Math.min(RECONNECT_MAX_MS, reconnectDelay * 2);
    }
  };

  ws.onerror = () => {
    ws.close();
  };
}

function frame(): void {
  if (inbox.length > 0) {
    view = applyAll(view, inbox);
    inbox = [];
  }
  const w = canvas.clientWidth;
  const h = canvas.clientHeight;
  const dpr = window.devicePixelRatio || 1;
  if (canvas.width !== Math.round(w * dpr)
      || canvas.height !== Math.round(h * dpr)) {
    canvas.width = Math.round(w * dpr);
    canvas.height = Math.round(h * dpr);
  }
  ctx.setTransform(dpr, 0, 0, dpr, 0, 0);
  if (!blocked) {
    drawView(ctx, view, w, h);
  }
  requestAnimationFrame(frame);
}

function sendInput(): void {
  // dropped silently unless the socket is open and the session known
  if (blocked || socket === null || socket.readyState !== WebSocket.OPEN
      || view.hello === null) {
    return;
  }
  const fields = sampler.sample();
  socket.send(encodeInput({
    sid: view.hello.sid,
    seq,
    tick: view.tick,
    axis1: fields.axis1,
    axis2: fields.axis2,
    mode_switch_pressed: fields.mode_switch_pressed,
    grip_toggle_pressed: fields.grip_toggle_pressed,
    timestamp_ms: Date.now(),
  }) + "\n");
  seq += 1;
}

window.addEventListener("keydown", (event) => {
  if (sampler.keyDown(event.code, event.repeat)) {
    event.preventDefault();
  }
});
window.addEventListener("keyup", (event) => {
  sampler.keyUp(event.code);
});
window.addEventListener("blur", () => {
  sampler.reset();
});

setInterval(sendInput, 1000 / SAMPLE_HZ);
connect();
requestAnimationFrame(frame);
