// Bridge socket client: parses server frames, numbers outgoing inputs,
// reconnects with exponential backoff. Frames produced while the socket is
// down are dropped (a tick without input is a legal no-op for the server),
// and after a reconnect the sequence resumes from the last acknowledged
// number + 1, which the server accepts because its watermark is per
// connection.

import type { HelloFrame, InputFields, StateFrame } from "./protocol.js";
import { encodeInput, parseServerFrame, ProtocolError } from "./protocol.js";

export type ConnectionStatus = "connecting" | "connected" | "closed";

/** The subset of the browser WebSocket shape the client relies on; the
    `ws` package satisfies it too, which is how tests inject sockets. */
export interface WebSocketLike {
  onopen: (() => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: (() => void) | null;
  onerror: (() => void) | null;
  send(data: string): void;
  close(): void;
}

export type SocketFactory = (url: string) => WebSocketLike;

export interface SocketClientOptions {
  url: string;
  factory: SocketFactory;
  backoffBaseMs?: number;
  backoffMaxMs?: number;
  onHello?: (frame: HelloFrame) => void;
  onState?: (frame: StateFrame) => void;
  onServerError?: (message: string) => void;
  onProtocolError?: (err: ProtocolError) => void;
  onStatus?: (status: ConnectionStatus) => void;
}

export class SocketClient {
  readonly url: string;
  droppedFrames = 0;

  private readonly opts: SocketClientOptions;
  private socket: WebSocketLike | null = null;
  private statusValue: ConnectionStatus = "closed";
  private attempts = 0; // consecutive closes without a successful open
  private ackedSeq = 0; // highest applied_seq reported by the server
  private sentSeq = 0; // last seq handed out on the current connection
  private closedByUser = false;
  private reconnectTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(opts: SocketClientOptions) {
    this.opts = opts;
    this.url = opts.url;
  }

  get status(): ConnectionStatus {
    return this.statusValue;
  }

  get lastAckedSeq(): number {
    return this.ackedSeq;
  }

  connect(): void {
    if (this.closedByUser) return;
    this.setStatus("connecting");
    const socket = this.opts.factory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.attempts = 0;
      this.sentSeq = this.ackedSeq; // resume numbering right after the last ack
      this.setStatus("connected");
    };
    socket.onmessage = (ev) => this.handleMessage(String(ev.data));
    socket.onerror = () => {
      // every error is followed by a close; reconnect logic lives there
    };
    socket.onclose = () => {
      this.socket = null;
      if (this.closedByUser) {
        this.setStatus("closed");
        return;
      }
      this.setStatus("connecting");
      this.scheduleReconnect();
    };
  }

  /** Send one input frame; returns its seq, or null when dropped. */
  sendInput(fields: InputFields): number | null {
    if (this.statusValue !== "connected" || this.socket === null) {
      this.droppedFrames += 1;
      return null;
    }
    const seq = this.sentSeq + 1;
    this.sentSeq = seq;
    this.socket.send(encodeInput(seq, fields));
    return seq;
  }

  close(): void {
    this.closedByUser = true;
    if (this.reconnectTimer !== null) {
      clearTimeout(this.reconnectTimer);
      this.reconnectTimer = null;
    }
    const socket = this.socket;
    this.socket = null;
    socket?.close();
    this.setStatus("closed");
  }

  private scheduleReconnect(): void {
    const base = this.opts.backoffBaseMs ?? 250;
    const cap = this.opts.backoffMaxMs ?? 4000;
    const delay = Math.min(base * 2 ** this.attempts, cap);
    this.attempts += 1;
    this.reconnectTimer = setTimeout(() => {
      this.reconnectTimer = null;
      this.connect();
    }, delay);
  }

  private handleMessage(text: string): void {
    let frame;
    try {
      frame = parseServerFrame(text);
    } catch (err) {
      if (err instanceof ProtocolError) {
        this.opts.onProtocolError?.(err);
        return;
      }
      throw err;
    }
    if (frame.type === "hello") {
      this.opts.onHello?.(frame);
    } else if (frame.type === "state") {
      if (frame.applied_seq !== null) {
        this.ackedSeq = Math.max(this.ackedSeq, frame.applied_seq);
      }
      this.opts.onState?.(frame);
    } else {
      this.opts.onServerError?.(frame.message);
    }
  }

  private setStatus(status: ConnectionStatus): void {
    if (status === this.statusValue) return;
    this.statusValue = status;
    this.opts.onStatus?.(status);
  }
}
