// Browser entry point. One state store, one input tracker, one socket;
// key events and socket frames funnel into the animation-frame loop, which
// sends at most one input frame per drawn frame.

import { InputTracker } from "./input.js";
import type { WebSocketLike } from "./net.js";
import { SocketClient } from "./net.js";
import { render } from "./render.js";
import { ViewModel } from "./view.js";

const canvas = document.getElementById("scene") as HTMLCanvasElement;
const hud = document.getElementById("hud");
const ctx = canvas.getContext("2d");
if (ctx === null) throw new Error("canvas 2d context unavailable");

const vm = new ViewModel();
const tracker = new InputTracker();
let role = "spectator";

const wsProto = location.protocol === "https:" ? "wss" : "ws";
const client = new SocketClient({
  url: `${wsProto}://${location.host}/session`,
  factory: (url) => new WebSocket(url) as unknown as WebSocketLike,
  onHello: (frame) => {
    role = frame.role;
    vm.applyHello(frame);
  },
  onState: (frame) => {
    vm.applyState(frame, performance.now());
  },
  onStatus: (status) => {
    vm.status = status;
  },
  onServerError: (message) => console.warn("input rejected:", message),
});
client.connect();

window.addEventListener("keydown", (ev) => {
  if (ev.repeat) return;
  tracker.keyDown(ev.code, vm.reveal);
});
window.addEventListener("keyup", (ev) => tracker.keyUp(ev.code));
window.addEventListener("blur", () => tracker.releaseAll());

function resize(): void {
  canvas.width = window.innerWidth;
  canvas.height = window.innerHeight;
}
window.addEventListener("resize", resize);
resize();

function frame(): void {
  const fields = tracker.takeFrame();
  if (fields !== null && role === "driver") client.sendInput(fields);
  render(vm, ctx!, canvas.width, canvas.height, performance.now());
  if (hud !== null) {
    const tick = vm.snapshot?.tick ?? "-";
    const overlay = vm.reveal ? " | reveal" : "";
    hud.textContent = `${role} | tick ${tick} | ${vm.status}${overlay}`;
  }
  requestAnimationFrame(frame);
}
requestAnimationFrame(frame);
