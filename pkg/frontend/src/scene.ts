// Scene construction: turn the view model into a flat list of world-space
// draw commands. Pure data so the stale-draw and reveal policies can be
// checked without a canvas.

import type { Point, Rect } from "./protocol.js";
import type { ViewModel } from "./view.js";

export type DrawCmd =
  | { op: "rect"; tag: string; rect: Rect; stroke: string; fill?: string; lineWidth?: number; dash?: number[]; alpha?: number }
  | { op: "segment"; tag: string; a: Point; b: Point; stroke: string; lineWidth?: number; dash?: number[]; alpha?: number }
  | { op: "disc"; tag: string; at: Point; r: number; fill: string; alpha?: number }
  | { op: "wedge"; tag: string; at: Point; heading: number; halfAngle: number; radius: number; fill: string; alpha: number }
  | { op: "dim"; alpha: number }
  | { op: "banner"; text: string };

const BOUNDARY_COLOR = "#8a919c";
const DOOR_OPEN = "#66bb66";
const DOOR_CLOSED = "#cc5555";
const COIN_COLOR = "#e8c547";
const AVATAR_COLOR = "#f2f3f5";
const TRUE_WALL_COLOR = "#ffffff";
const GOAL_COLOR = "#7fd4c1";

/** Build the frame's draw list; empty when no snapshot has arrived yet. */
export function buildScene(vm: ViewModel, nowMs: number): DrawCmd[] {
  const hello = vm.hello;
  const snap = vm.snapshot;
  if (hello === null || snap === null) return [];

  const cmds: DrawCmd[] = [];
  const real = hello.layout.real;
  cmds.push({
    op: "rect",
    tag: "boundary",
    rect: [-real.width / 2, -real.depth / 2, real.width / 2, real.depth / 2],
    stroke: BOUNDARY_COLOR,
    lineWidth: 3,
  });

  const colors = new Map(hello.layout.rooms.map((r) => [r.id, r.color]));
  for (const room of snap.rooms) {
    const rect = vm.drawnRect(room.id) ?? room.rect;
    const color = colors.get(room.id) ?? "#888888";
    cmds.push({
      op: "rect",
      tag: `room:${room.id}`,
      rect,
      stroke: color,
      fill: color,
      alpha: room.id === snap.room ? 0.28 : 0.12,
      lineWidth: 2,
    });
  }

  for (const door of snap.doors) {
    const seg = vm.drawnDoorSeg(door.id) ?? door.seg;
    cmds.push({
      op: "segment",
      tag: `door:${door.id}`,
      a: seg[0],
      b: seg[1],
      stroke: door.open ? DOOR_OPEN : DOOR_CLOSED,
      lineWidth: 5,
    });
  }

  snap.coins.forEach((coin, i) => {
    cmds.push({ op: "disc", tag: `coin:${i}`, at: coin, r: 0.09, fill: COIN_COLOR });
  });

  const pose = vm.renderPose(nowMs);
  if (pose !== null) {
    cmds.push({
      op: "wedge",
      tag: "fov",
      at: pose.pos,
      heading: pose.heading,
      halfAngle: hello.fov_half_angle,
      radius: 1.4,
      fill: "#ffffff",
      alpha: 0.07,
    });
    cmds.push({ op: "disc", tag: "avatar", at: pose.pos, r: 0.12, fill: AVATAR_COLOR });
    cmds.push({
      op: "segment",
      tag: "avatar:heading",
      a: pose.pos,
      b: [pose.pos[0] + Math.cos(pose.heading) * 0.28, pose.pos[1] + Math.sin(pose.heading) * 0.28],
      stroke: AVATAR_COLOR,
      lineWidth: 2,
    });
  }

  if (snap.reveal) {
    // researcher overlay: true wall positions plus the restore goal
    for (const room of snap.rooms) {
      cmds.push({
        op: "rect",
        tag: `true:${room.id}`,
        rect: room.rect,
        stroke: TRUE_WALL_COLOR,
        dash: [0.12, 0.08],
        alpha: 0.65,
        lineWidth: 1,
      });
    }
    const meta = hello.layout.rooms.find((r) => r.id === snap.room);
    if (meta !== undefined) {
      cmds.push({
        op: "rect",
        tag: `goal:${snap.room}`,
        rect: [-meta.width / 2, -meta.depth / 2, meta.width / 2, meta.depth / 2],
        stroke: GOAL_COLOR,
        dash: [0.22, 0.12],
        alpha: 0.9,
        lineWidth: 1.5,
      });
    }
  }

  if (vm.status !== "connected") {
    cmds.push({ op: "dim", alpha: 0.55 });
    cmds.push({ op: "banner", text: vm.status === "connecting" ? "connecting..." : "disconnected" });
  }
  return cmds;
}
