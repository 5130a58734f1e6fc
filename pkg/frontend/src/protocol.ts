// Wire protocol v1 for the bridge server. Every frame is canonical JSON:
// keys sorted, no whitespace. Holding outgoing frames to the same bytes
// keeps recorded sessions reproducible and lets tests compare literally.

export const PROTOCOL_VERSION = 1;

export type Point = [number, number];
/** Axis-aligned rect as [min_x, min_y, max_x, max_y]. */
export type Rect = [number, number, number, number];

export interface RealSpace {
  width: number;
  depth: number;
}

export interface LayoutRoom {
  id: string;
  width: number;
  depth: number;
  x: number;
  y: number;
  color: string;
}

export interface LayoutDoor {
  id: string;
  a: string;
  b: string;
  side: "north" | "south" | "east" | "west";
  offset: number;
  width: number;
}

export interface HelloLayout {
  real: RealSpace;
  rooms: LayoutRoom[];
  doors: LayoutDoor[];
}

export interface HelloFrame {
  v: number;
  type: "hello";
  role: "driver" | "spectator";
  seed: number;
  tick: number;
  dt: number;
  speed_cap: number;
  turn_cap: number;
  fov_half_angle: number;
  layout: HelloLayout;
}

export interface RoomStateEntry {
  id: string;
  rect: Rect;
}

export interface DoorStateEntry {
  id: string;
  open: boolean;
  seg: [Point, Point];
}

export interface AvatarPose {
  pos: Point;
  heading: number;
}

export interface TraceEvent {
  tick: number;
  kind: string;
  [key: string]: unknown;
}

export interface StateFrame {
  v: number;
  type: "state";
  tick: number;
  room: string;
  phase: string;
  pose: AvatarPose;
  rooms: RoomStateEntry[];
  doors: DoorStateEntry[];
  coins: Point[];
  events: TraceEvent[];
  reveal: boolean;
  applied_seq: number | null;
}

export interface ErrorFrame {
  v: number;
  type: "error";
  message: string;
}

export type ServerFrame = HelloFrame | StateFrame | ErrorFrame;

export class ProtocolError extends Error {}

/** Serialize with sorted keys and no spacing; undefined members are dropped. */
export function canonicalJson(value: unknown): string {
  if (value === null || typeof value !== "object") return JSON.stringify(value);
  if (Array.isArray(value)) {
    return "[" + value.map((item) => canonicalJson(item ?? null)).join(",") + "]";
  }
  const record = value as Record<string, unknown>;
  const body = Object.keys(record)
    .filter((key) => record[key] !== undefined)
    .sort()
    .map((key) => JSON.stringify(key) + ":" + canonicalJson(record[key]));
  return "{" + body.join(",") + "}";
}

/** Intents for one input frame; all optional, absent means "no change". */
export interface InputFields {
  /** Wire order: [forward, strafe right], each in [-1, 1]. */
  move?: Point;
  turn?: number;
  doorToggle?: boolean;
  reveal?: boolean;
}

const clampUnit = (v: number) => Math.min(Math.max(v, -1), 1);

/** Canonical bytes of one input frame. Intents are clamped here so every
    frame that reaches the wire is already in range. */
export function encodeInput(seq: number, fields: InputFields): string {
  if (!Number.isInteger(seq) || seq < 1) {
    throw new ProtocolError(`seq must be a positive integer, got ${seq}`);
  }
  return canonicalJson({
    v: PROTOCOL_VERSION,
    type: "input",
    seq,
    move: fields.move ? [clampUnit(fields.move[0]), clampUnit(fields.move[1])] : undefined,
    turn: fields.turn === undefined ? undefined : clampUnit(fields.turn),
    door_toggle: fields.doorToggle,
    reveal: fields.reveal,
  });
}

export function parseServerFrame(text: string): ServerFrame {
  let obj: unknown;
  try {
    obj = JSON.parse(text);
  } catch {
    throw new ProtocolError("not valid JSON");
  }
  if (typeof obj !== "object" || obj === null || Array.isArray(obj)) {
    throw new ProtocolError("frame must be an object");
  }
  const frame = obj as Record<string, unknown>;
  if (frame.v !== PROTOCOL_VERSION) {
    throw new ProtocolError(`unsupported protocol version ${String(frame.v)}`);
  }
  switch (frame.type) {
    case "hello":
      if (typeof frame.role !== "string" || typeof frame.layout !== "object" || frame.layout === null) {
        throw new ProtocolError("malformed hello frame");
      }
      return frame as unknown as HelloFrame;
    case "state":
      if (!Array.isArray(frame.rooms) || typeof frame.pose !== "object" || frame.pose === null) {
        throw new ProtocolError("malformed state frame");
      }
      return frame as unknown as StateFrame;
    case "error":
      if (typeof frame.message !== "string") {
        throw new ProtocolError("malformed error frame");
      }
      return frame as unknown as ErrorFrame;
    default:
      throw new ProtocolError(`unexpected frame type ${String(frame.type)}`);
  }
}
