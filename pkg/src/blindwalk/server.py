"""Websocket bridge: drive a live session from a browser.

One session per process. The first websocket on /session becomes the driver;
later ones spectate. Frames are canonical JSON (sorted keys, no spaces), all
carrying "v": 1:

  hello  server -> client   role, seed, layout, motion caps, current tick
  input  client -> server   seq, move axes, turn axis, door_toggle, reveal
  state  server -> clients  pose, room rects, doors, coins, tick events, ack
  error  server -> client   sent only for a malformed input frame

Inputs are sampled once per tick, last writer wins, and move axes are given
in the avatar frame (forward, strafe right); the bridge converts them to
world space before handing them to the engine. Wall-clock pacing never feeds
the simulation: state is a function of the seed and the applied inputs only,
so a recorded input log replays to a byte-identical trace.
"""

from __future__ import annotations

import asyncio
import json
import logging
import math
from contextlib import asynccontextmanager
from dataclasses import dataclass
from typing import TextIO

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .agent import TICK_DT, Action
from .geometry import Vec2
from .layout import DoorState, door_segment_current, load_layout
from .simulator import AppliedInput, RunConfig, SimSession

logger = logging.getLogger("blindwalk.server")

PROTOCOL_VERSION = 1


@dataclass
class BridgeSettings:
    layout_path: str
    seed: int = 0
    dt: float = TICK_DT
    tick_interval: float | None = 1.0 / 30.0  # None: no timer, ticks are driven externally
    static_dir: str | None = None
    input_log_path: str | None = None


def canonical(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


class _Client:
    def __init__(self, ws: WebSocket, role: str) -> None:
        self.ws = ws
        self.role = role
        self.last_seq = 0
        self.pending: dict | None = None
        self.applied_seq: int | None = None


_INPUT_FIELDS = {"v", "type", "seq", "move", "turn", "door_toggle", "reveal"}


def _parse_input(text: str) -> dict | str:
    """Returns the validated frame, or an error message string."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        return "not valid JSON"
    if not isinstance(obj, dict):
        return "frame must be an object"
    if obj.get("v") != PROTOCOL_VERSION:
        return f"unsupported protocol version {obj.get('v')!r}"
    if obj.get("type") != "input":
        return f"unexpected frame type {obj.get('type')!r}"
    unknown = set(obj) - _INPUT_FIELDS
    if unknown:
        return f"unknown field {sorted(unknown)[0]!r}"
    seq = obj.get("seq")
    if not isinstance(seq, int) or isinstance(seq, bool) or seq < 1:
        return "seq must be a positive integer"
    move = obj.get("move", [0.0, 0.0])
    if (
        not isinstance(move, list) or len(move) != 2
        or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in move)
    ):
        return "move must be [forward, strafe] numbers"
    turn = obj.get("turn", 0.0)
    if not isinstance(turn, (int, float)) or isinstance(turn, bool):
        return "turn must be a number"
    for key in ("door_toggle", "reveal"):
        if key in obj and not isinstance(obj[key], bool):
            return f"{key} must be a boolean"
    clamp = lambda v: min(max(float(v), -1.0), 1.0)  # noqa: E731
    return {
        "seq": seq,
        "move": [clamp(move[0]), clamp(move[1])],
        "turn": clamp(turn),
        "door_toggle": bool(obj.get("door_toggle", False)),
        "reveal": obj.get("reveal"),
    }


class Bridge:
    """Owns the session, the connected clients, and the tick loop."""

    def __init__(self, settings: BridgeSettings) -> None:
        self.settings = settings
        layout = load_layout(settings.layout_path)
        config = RunConfig(layout_path=settings.layout_path, policy="idle", seed=settings.seed, ticks=0, dt=settings.dt)
        self.session = SimSession(config, layout)
        self.clients: list[_Client] = []
        self.reveal = False
        self._tick_lock = asyncio.Lock()
        self._log_fh: TextIO | None = None
        if settings.input_log_path:
            self._log_fh = open(settings.input_log_path, "w", encoding="utf-8")

    # -- client bookkeeping --

    @property
    def driver(self) -> _Client | None:
        for c in self.clients:
            if c.role == "driver":
                return c
        return None

    async def attach(self, ws: WebSocket) -> _Client:
        role = "driver" if self.driver is None else "spectator"
        client = _Client(ws, role)
        self.clients.append(client)
        await ws.send_text(self.hello_frame(client))
        await ws.send_text(self.state_frame(client, events=[]))
        return client

    async def detach(self, client: _Client) -> None:
        if client in self.clients:
            self.clients.remove(client)
        if client.role == "driver" and self.clients:
            heir = self.clients[0]
            heir.role = "driver"
            try:
                await heir.ws.send_text(self.hello_frame(heir))
            except Exception:  # noqa: BLE001  (socket already going away)
                pass

    # -- frames --

    def hello_frame(self, client: _Client) -> str:
        layout = self.session.layout
        return canonical({
            "v": PROTOCOL_VERSION,
            "type": "hello",
            "role": client.role,
            "seed": self.settings.seed,
            "dt": self.session.config.dt,
            "tick": self.session.tick,
            "speed_cap": self.session.config.speed_cap,
            "turn_cap": self.session.config.turn_cap,
            "fov_half_angle": self.session.config.fov_half_angle,
            "layout": {
                "real": {"width": layout.real.width, "depth": layout.real.depth},
                "rooms": [
                    {"id": r.id, "width": r.width, "depth": r.depth, "x": r.x, "y": r.y, "color": r.color}
                    for r in layout.rooms.values()
                ],
                "doors": [
                    {"id": d.id, "a": d.room_a, "b": d.room_b, "side": d.side.value,
                     "offset": d.offset, "width": d.width}
                    for d in layout.doors
                ],
            },
        })

    def state_frame(self, client: _Client, events: list) -> str:
        session = self.session
        layout = session.layout
        rooms = [
            {"id": r.id, "rect": [r.current_rect.min_x, r.current_rect.min_y,
                                  r.current_rect.max_x, r.current_rect.max_y]}
            for r in layout.rooms.values()
        ]
        doors = []
        for d in layout.doors:
            seg = door_segment_current(layout, d)
            doors.append({
                "id": d.id,
                "open": d.state is DoorState.OPEN,
                "seg": [[seg.a.x, seg.a.y], [seg.b.x, seg.b.y]],
            })
        room = layout.rooms[session.state.current_room]
        coins = [[p.x, p.y] for p in session.task.tracked_positions(room.current_rect)]
        return canonical({
            "v": PROTOCOL_VERSION,
            "type": "state",
            "tick": session.tick,
            "pose": {"pos": [session.pose.position.x, session.pose.position.y],
                     "heading": session.pose.heading},
            "room": session.state.current_room,
            "phase": session.state.phase.value,
            "rooms": rooms,
            "doors": doors,
            "coins": coins,
            "events": [e.to_json_obj() for e in events],
            "applied_seq": client.applied_seq if client.role == "driver" else None,
            "reveal": self.reveal,
        })

    @staticmethod
    def error_frame(message: str) -> str:
        return canonical({"v": PROTOCOL_VERSION, "type": "error", "message": message})

    # -- input and ticking --

    async def handle_text(self, client: _Client, text: str) -> None:
        parsed = _parse_input(text)
        if isinstance(parsed, str):
            await client.ws.send_text(self.error_frame(parsed))
            return
        if parsed["seq"] <= client.last_seq:
            return  # stale or duplicate; the newest frame already won
        client.last_seq = parsed["seq"]
        client.pending = parsed

    def _action_from(self, frame: dict) -> Action:
        cfg = self.session.config
        h = self.session.pose.heading
        fwd = Vec2(math.cos(h), math.sin(h))
        right = Vec2(math.sin(h), -math.cos(h))
        step = cfg.speed_cap * cfg.dt
        move = Vec2(
            (fwd.x * frame["move"][0] + right.x * frame["move"][1]) * step,
            (fwd.y * frame["move"][0] + right.y * frame["move"][1]) * step,
        )
        turn = frame["turn"] * cfg.turn_cap * cfg.dt
        door_command = None
        if frame["door_toggle"]:
            door_command = self._nearest_door_toggle()
        return Action(move=move, turn=turn, door_command=door_command)

    def _nearest_door_toggle(self) -> tuple[str, DoorState] | None:
        session = self.session
        layout = session.layout
        best: tuple[float, str, DoorState] | None = None
        for d in sorted(layout.doors_of(session.state.current_room), key=lambda d: d.id):
            seg = door_segment_current(layout, d, session.state.current_room)
            mid = Vec2((seg.a.x + seg.b.x) / 2.0, (seg.a.y + seg.b.y) / 2.0)
            dist = (mid - session.pose.position).norm()
            if best is None or dist < best[0]:
                want = DoorState.CLOSED if d.state is DoorState.OPEN else DoorState.OPEN
                best = (dist, d.id, want)
        if best is None:
            return None
        return best[1], best[2]

    async def tick_once(self) -> None:
        async with self._tick_lock:
            driver = self.driver
            action = Action()
            applied = None
            if driver is not None and driver.pending is not None:
                frame = driver.pending
                driver.pending = None
                if frame["reveal"] is not None:
                    self.reveal = frame["reveal"]
                action = self._action_from(frame)
                applied = frame["seq"]
            events = self.session.step(action)
            if driver is not None and applied is not None:
                driver.applied_seq = applied
            if self._log_fh is not None:
                entry = self.session.input_log[-1]
                self._log_fh.write(json.dumps(entry.to_json_obj(), separators=(",", ":")) + "\n")
                self._log_fh.flush()
            dead = []
            for client in list(self.clients):
                try:
                    await client.ws.send_text(self.state_frame(client, events))
                except Exception:  # noqa: BLE001  (peer vanished mid-broadcast)
                    dead.append(client)
            for client in dead:
                await self.detach(client)

    async def run_timer(self) -> None:
        assert self.settings.tick_interval is not None
        try:
            while True:
                await asyncio.sleep(self.settings.tick_interval)
                if self.driver is not None:
                    await self.tick_once()
        except asyncio.CancelledError:
            pass

    def close(self) -> None:
        if self._log_fh is not None:
            self._log_fh.close()
            self._log_fh = None


def create_app(settings: BridgeSettings) -> FastAPI:
    bridge = Bridge(settings)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        timer: asyncio.Task | None = None
        if settings.tick_interval is not None:
            timer = asyncio.create_task(bridge.run_timer())
        try:
            yield
        finally:
            if timer is not None:
                timer.cancel()
            bridge.close()

    app = FastAPI(lifespan=lifespan)
    app.state.bridge = bridge

    @app.websocket("/session")
    async def session_ws(ws: WebSocket) -> None:
        await ws.accept()
        client = await bridge.attach(ws)
        try:
            while True:
                text = await ws.receive_text()
                await bridge.handle_text(client, text)
        except WebSocketDisconnect:
            pass
        finally:
            await bridge.detach(client)

    @app.get("/control/status")
    async def status() -> dict:
        driver = bridge.driver
        return {
            "tick": bridge.session.tick,
            "clients": len(bridge.clients),
            "paused": driver is None,
            "driver_pending_seq": driver.last_seq if driver else None,
        }

    @app.post("/control/tick")
    async def control_tick(count: int = 1) -> dict:
        for _ in range(max(count, 0)):
            await bridge.tick_once()
        return {"tick": bridge.session.tick}

    if settings.static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=settings.static_dir, html=True), name="viewer")

    return app
