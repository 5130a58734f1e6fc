// Canvas painter for the scene's draw commands. World coordinates are
// meters, origin at the tracked-space center, y up; the screen transform
// flips y and fits the tracked space with a margin.

import type { DrawCmd } from "./scene.js";
import { buildScene } from "./scene.js";
import type { ViewModel } from "./view.js";

/** The 2d-context subset the painter uses; a plain recording object can
    stand in for tests. */
export interface Canvas2D {
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number, ccw?: boolean): void;
  closePath(): void;
  fill(): void;
  stroke(): void;
  setLineDash(segments: number[]): void;
  fillText(text: string, x: number, y: number): void;
  save(): void;
  restore(): void;
  lineWidth: number;
  strokeStyle: unknown;
  fillStyle: unknown;
  globalAlpha: number;
  font: string;
  textAlign: unknown;
  textBaseline: unknown;
}

export interface Viewport {
  scale: number;
  toX(x: number): number;
  toY(y: number): number;
}

export function viewportFor(
  world: { width: number; depth: number },
  width: number,
  height: number,
  margin = 28,
): Viewport {
  const scale = Math.min((width - 2 * margin) / world.width, (height - 2 * margin) / world.depth);
  return {
    scale,
    toX: (x: number) => width / 2 + x * scale,
    toY: (y: number) => height / 2 - y * scale,
  };
}

export function render(vm: ViewModel, ctx: Canvas2D, width: number, height: number, nowMs: number): void {
  const cmds = buildScene(vm, nowMs);
  if (cmds.length === 0) return; // no snapshot yet: skip the frame
  ctx.clearRect(0, 0, width, height);
  const vp = viewportFor(vm.hello!.layout.real, width, height);
  for (const cmd of cmds) paintOne(ctx, cmd, vp, width, height);
}

function paintOne(ctx: Canvas2D, cmd: DrawCmd, vp: Viewport, width: number, height: number): void {
  ctx.save();
  switch (cmd.op) {
    case "rect": {
      const x = vp.toX(cmd.rect[0]);
      const y = vp.toY(cmd.rect[3]); // north edge is the top of the screen rect
      const w = (cmd.rect[2] - cmd.rect[0]) * vp.scale;
      const h = (cmd.rect[3] - cmd.rect[1]) * vp.scale;
      ctx.globalAlpha = cmd.alpha ?? 1;
      if (cmd.dash) ctx.setLineDash(cmd.dash.map((d) => d * vp.scale));
      if (cmd.fill !== undefined) {
        ctx.fillStyle = cmd.fill;
        ctx.fillRect(x, y, w, h);
      }
      ctx.strokeStyle = cmd.stroke;
      ctx.lineWidth = cmd.lineWidth ?? 1;
      ctx.strokeRect(x, y, w, h);
      break;
    }
    case "segment": {
      ctx.globalAlpha = cmd.alpha ?? 1;
      if (cmd.dash) ctx.setLineDash(cmd.dash.map((d) => d * vp.scale));
      ctx.strokeStyle = cmd.stroke;
      ctx.lineWidth = cmd.lineWidth ?? 1;
      ctx.beginPath();
      ctx.moveTo(vp.toX(cmd.a[0]), vp.toY(cmd.a[1]));
      ctx.lineTo(vp.toX(cmd.b[0]), vp.toY(cmd.b[1]));
      ctx.stroke();
      break;
    }
    case "disc": {
      ctx.globalAlpha = cmd.alpha ?? 1;
      ctx.fillStyle = cmd.fill;
      ctx.beginPath();
      ctx.arc(vp.toX(cmd.at[0]), vp.toY(cmd.at[1]), cmd.r * vp.scale, 0, Math.PI * 2);
      ctx.fill();
      break;
    }
    case "wedge": {
      // screen y is flipped, so world angles paint as negative arcs
      ctx.globalAlpha = cmd.alpha;
      ctx.fillStyle = cmd.fill;
      const cx = vp.toX(cmd.at[0]);
      const cy = vp.toY(cmd.at[1]);
      ctx.beginPath();
      ctx.moveTo(cx, cy);
      ctx.arc(cx, cy, cmd.radius * vp.scale, -(cmd.heading - cmd.halfAngle), -(cmd.heading + cmd.halfAngle), true);
      ctx.closePath();
      ctx.fill();
      break;
    }
    case "dim": {
      ctx.globalAlpha = cmd.alpha;
      ctx.fillStyle = "#000000";
      ctx.fillRect(0, 0, width, height);
      break;
    }
    case "banner": {
      ctx.globalAlpha = 1;
      ctx.fillStyle = "#f2f3f5";
      ctx.font = "16px system-ui, sans-serif";
      ctx.textAlign = "center";
      ctx.textBaseline = "middle";
      ctx.fillText(cmd.text, width / 2, height / 2);
      break;
    }
  }
  ctx.restore();
}
