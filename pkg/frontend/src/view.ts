// Client-side session state. Everything rendered comes from server
// snapshots; the one piece of derived state is the stale-draw bookkeeping:
// a wall outside the avatar's view cone keeps its last in-view coordinate
// until it is seen again, which is exactly what the avatar would believe
// the room looks like.

import { fullyOutsideFov, lerpAngle } from "./fov.js";
import type { ConnectionStatus } from "./net.js";
import type { HelloFrame, Point, Rect, StateFrame, TraceEvent } from "./protocol.js";

export type WallSide = "west" | "south" | "east" | "north";

// Index i of SIDES is also the index of that wall's coordinate in a Rect.
const SIDES: WallSide[] = ["west", "south", "east", "north"];

/** Endpoints of one wall of an axis-aligned rect. */
export function wallSegment(rect: Rect, side: WallSide): [Point, Point] {
  const [x0, y0, x1, y1] = rect;
  switch (side) {
    case "west":
      return [
        [x0, y0],
        [x0, y1],
      ];
    case "east":
      return [
        [x1, y0],
        [x1, y1],
      ];
    case "south":
      return [
        [x0, y0],
        [x1, y0],
      ];
    case "north":
      return [
        [x0, y1],
        [x1, y1],
      ];
  }
}

export interface RenderPose {
  pos: Point;
  heading: number;
}

export class ViewModel {
  hello: HelloFrame | null = null;
  snapshot: StateFrame | null = null;
  status: ConnectionStatus = "connecting";

  private stale = new Map<string, Rect>(); // room id -> wall coords as drawn
  private staleDoors = new Map<string, [Point, Point]>();
  private prevPose: RenderPose | null = null;
  private snapshotAt = 0;

  get reveal(): boolean {
    return this.snapshot?.reveal ?? false;
  }

  /** A fresh hello restarts the session view (first connect, reconnect,
      or promotion to driver); stale bookkeeping starts over with it. */
  applyHello(frame: HelloFrame): void {
    this.hello = frame;
    this.snapshot = null;
    this.prevPose = null;
    this.stale.clear();
    this.staleDoors.clear();
  }

  applyState(frame: StateFrame, nowMs: number): TraceEvent[] {
    this.prevPose = this.snapshot
      ? { pos: [...this.snapshot.pose.pos], heading: this.snapshot.pose.heading }
      : null;
    this.snapshot = frame;
    this.snapshotAt = nowMs;
    if (this.hello !== null) this.updateStale(frame, this.hello.fov_half_angle);
    return frame.events;
  }

  /** Wall coordinates to draw for a room with reveal off. */
  drawnRect(roomId: string): Rect | null {
    const drawn = this.stale.get(roomId);
    return drawn ? [drawn[0], drawn[1], drawn[2], drawn[3]] : null;
  }

  drawnDoorSeg(doorId: string): [Point, Point] | null {
    const seg = this.staleDoors.get(doorId);
    return seg ? [[...seg[0]], [...seg[1]]] : null;
  }

  /** Pose for rendering: the latest pose eased in from the previous one. */
  renderPose(nowMs: number): RenderPose | null {
    const snap = this.snapshot;
    if (snap === null) return null;
    const target = snap.pose;
    const prev = this.prevPose;
    const dtMs = (this.hello?.dt ?? 0) * 1000;
    if (prev === null || dtMs <= 0) return { pos: [...target.pos], heading: target.heading };
    const t = Math.min(Math.max((nowMs - this.snapshotAt) / dtMs, 0), 1);
    return {
      pos: [
        prev.pos[0] + (target.pos[0] - prev.pos[0]) * t,
        prev.pos[1] + (target.pos[1] - prev.pos[1]) * t,
      ],
      heading: lerpAngle(prev.heading, target.heading, t),
    };
  }

  private updateStale(frame: StateFrame, halfAngle: number): void {
    const [px, py] = frame.pose.pos;
    const eye = { x: px, y: py, heading: frame.pose.heading };
    for (const room of frame.rooms) {
      // first sight of a room baselines every wall at its true position
      const drawn = this.stale.get(room.id) ?? ([...room.rect] as Rect);
      SIDES.forEach((side, i) => {
        const [a, b] = wallSegment(room.rect, side);
        const visible = !fullyOutsideFov(eye, { x: a[0], y: a[1] }, { x: b[0], y: b[1] }, halfAngle);
        if (visible) drawn[i] = room.rect[i] as number;
      });
      this.stale.set(room.id, drawn);
    }
    for (const door of frame.doors) {
      const [a, b] = door.seg;
      const known = this.staleDoors.get(door.id);
      const visible = !fullyOutsideFov(eye, { x: a[0], y: a[1] }, { x: b[0], y: b[1] }, halfAngle);
      if (known === undefined || visible) {
        this.staleDoors.set(door.id, [[...a], [...b]]);
      }
    }
  }
}
