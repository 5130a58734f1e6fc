// Keyboard intents. WASD moves, Q/E turns, F toggles the nearest door,
// R toggles the reveal overlay. Move intents live in the avatar frame with
// x = strafe right and y = forward, so holding W reads as (0, 1).

import type { InputFields, Point } from "./protocol.js";

const MOVE_KEYS: Record<string, Point> = {
  KeyW: [0, 1],
  KeyS: [0, -1],
  KeyD: [1, 0],
  KeyA: [-1, 0],
};

const clampUnit = (v: number) => Math.min(Math.max(v, -1), 1);

export class InputTracker {
  private held = new Set<string>();
  private doorPending = false;
  private revealPending: boolean | undefined;

  /** revealNow is the server's current overlay flag, so R can invert it. */
  keyDown(code: string, revealNow = false): void {
    if (!this.held.has(code)) {
      // edge-triggered toggles; key autorepeat must not refire them
      if (code === "KeyF") this.doorPending = true;
      if (code === "KeyR") this.revealPending = !revealNow;
    }
    this.held.add(code);
  }

  keyUp(code: string): void {
    this.held.delete(code);
  }

  releaseAll(): void {
    this.held.clear();
  }

  /** Current move intent in the avatar frame, each axis clamped to [-1, 1]. */
  moveIntent(): Point {
    let x = 0;
    let y = 0;
    for (const [code, [ix, iy]] of Object.entries(MOVE_KEYS)) {
      if (this.held.has(code)) {
        x += ix;
        y += iy;
      }
    }
    return [clampUnit(x), clampUnit(y)];
  }

  turnIntent(): number {
    let turn = 0;
    if (this.held.has("KeyQ")) turn -= 1;
    if (this.held.has("KeyE")) turn += 1;
    return clampUnit(turn);
  }

  /** Drain pending intents into at most one frame; null when silent. */
  takeFrame(): InputFields | null {
    const [x, y] = this.moveIntent();
    const turn = this.turnIntent();
    const fields: InputFields = {};
    if (x !== 0 || y !== 0) fields.move = [y, x]; // wire order: forward, strafe
    if (turn !== 0) fields.turn = turn;
    if (this.doorPending) {
      fields.doorToggle = true;
      this.doorPending = false;
    }
    if (this.revealPending !== undefined) {
      fields.reveal = this.revealPending;
      this.revealPending = undefined;
    }
    const silent =
      fields.move === undefined &&
      fields.turn === undefined &&
      fields.doorToggle === undefined &&
      fields.reveal === undefined;
    return silent ? null : fields;
  }
}
