"""Deterministic fixed-timestep simulation runs and trace tooling.

A run is fully determined by (config, seed): the single seed is split into
named streams (policy, coin-spawn) and the loop never consults a wall clock.
Traces are JSON lines, one event per line, and are byte-identical across
repeat runs. RunMetrics are always recomputed from the trace, so the trace is
the single source of truth.

check_trace_invariants is the independent safety auditor: it rebuilds every
wall from the layout plus logged displacements and re-derives distances,
visibility, and gain bounds from the geometry and threshold table alone,
sharing none of the engine's budgeting code.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .agent import (
    COIN_COLLECT_RADIUS,
    COIN_MARGIN,
    COINS_PER_ROOM,
    TICK_DT,
    TURN_SPEED,
    WALK_SPEED,
    Action,
    CoinTask,
    DoorView,
    Observation,
    Policy,
    make_policy,
)
from .gain import DEFAULT_THRESHOLDS, GainThresholds, ThresholdRow, thresholds_at
from .geometry import (
    DEFAULT_FOV_HALF_ANGLE,
    SIDES,
    Side,
    UserPose,
    Vec2,
    WallSegment,
    contains,
    fully_outside_fov,
    normalize_angle,
    shortest_distance,
)
from .layout import DoorState, VirtualLayout, door_segment_current, load_layout, neighbors
from .redirection import (
    MIN_ROOM_DIMENSION,
    EventKind,
    RedirectionEvent,
    init_navigation,
    nav_tick,
)
from .rng import stream

logger = logging.getLogger("blindwalk.simulator")


@dataclass(frozen=True)
class RunConfig:
    layout_path: str
    policy: str = "coin_collector"
    seed: int = 0
    ticks: int = 9000  # five simulated minutes at 30 Hz
    dt: float = TICK_DT
    fov_half_angle: float = DEFAULT_FOV_HALF_ANGLE
    start_room: str | None = None
    speed_cap: float = WALK_SPEED
    turn_cap: float = TURN_SPEED
    coins_per_room: int = COINS_PER_ROOM
    collect_radius: float = COIN_COLLECT_RADIUS
    min_room_dimension: float = MIN_ROOM_DIMENSION
    thresholds: GainThresholds = DEFAULT_THRESHOLDS


class ConfigError(ValueError):
    """Raised for malformed run-config documents."""


_CONFIG_FIELDS = {
    "layout", "policy", "seed", "ticks", "dt", "fov_half_angle_deg", "start_room",
    "speed_cap", "turn_cap_deg_s", "coins_per_room", "collect_radius",
    "min_room_dimension", "thresholds",
}


def parse_run_config(text: str, layout_dir: str = ".") -> RunConfig:
    """Parse a run-config JSON document. Unknown fields are rejected."""
    import os

    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be an object")
    unknown = set(doc) - _CONFIG_FIELDS
    if unknown:
        raise ConfigError(f"unknown config field {sorted(unknown)[0]!r}")
    if "layout" not in doc or not isinstance(doc["layout"], str):
        raise ConfigError("config needs a 'layout' path")

    def _num(key, default, positive=True):
        v = doc.get(key, default)
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{key}: expected a number")
        if positive and v <= 0:
            raise ConfigError(f"{key}: must be positive")
        return float(v)

    def _int(key, default, minimum=0):
        v = doc.get(key, default)
        if isinstance(v, bool) or not isinstance(v, int):
            raise ConfigError(f"{key}: expected an integer")
        if v < minimum:
            raise ConfigError(f"{key}: must be >= {minimum}")
        return v

    thresholds = DEFAULT_THRESHOLDS
    if "thresholds" in doc:
        rows = doc["thresholds"]
        if not isinstance(rows, list) or not all(isinstance(r, list) and len(r) == 4 for r in rows):
            raise ConfigError("thresholds: expected a list of [distance, lower, pse, upper] rows")
        try:
            thresholds = GainThresholds(rows=tuple(ThresholdRow(*map(float, r)) for r in rows))
        except ValueError as e:
            raise ConfigError(f"thresholds: {e}") from None

    policy = doc.get("policy", "coin_collector")
    if not isinstance(policy, str):
        raise ConfigError("policy: expected a string")
    start_room = doc.get("start_room")
    if start_room is not None and not isinstance(start_room, str):
        raise ConfigError("start_room: expected a string")

    return RunConfig(
        layout_path=os.path.join(layout_dir, doc["layout"]),
        policy=policy,
        seed=_int("seed", 0, minimum=-(2**63)),
        ticks=_int("ticks", 9000, minimum=0),
        dt=_num("dt", TICK_DT),
        fov_half_angle=math.radians(_num("fov_half_angle_deg", 55.0)),
        start_room=start_room,
        speed_cap=_num("speed_cap", WALK_SPEED),
        turn_cap=math.radians(_num("turn_cap_deg_s", 180.0)),
        coins_per_room=_int("coins_per_room", COINS_PER_ROOM),
        collect_radius=_num("collect_radius", COIN_COLLECT_RADIUS),
        min_room_dimension=_num("min_room_dimension", MIN_ROOM_DIMENSION),
        thresholds=thresholds,
    )


def load_run_config(path: str) -> RunConfig:
    import os

    with open(path, encoding="utf-8") as fh:
        return parse_run_config(fh.read(), layout_dir=os.path.dirname(path) or ".")


# ---------- session ----------


@dataclass
class AppliedInput:
    """The post-clamp action actually applied at one tick; the replay unit."""

    tick: int
    move: tuple[float, float]
    turn: float
    door: tuple[str, str] | None

    def to_json_obj(self) -> dict:
        return {
            "tick": self.tick,
            "move": [self.move[0], self.move[1]],
            "turn": self.turn,
            "door": list(self.door) if self.door else None,
        }


class SimSession:
    """One run in progress: engine state, pose, coins, and the growing trace."""

    def __init__(self, config: RunConfig, layout: VirtualLayout) -> None:
        self.config = config
        self.layout = layout
        start = config.start_room or next(iter(layout.rooms))
        o_c = layout.real.rect.center
        self.pose = UserPose(o_c, 0.0)
        self.state, init_events = init_navigation(
            layout, start, config.thresholds, self.pose,
            fov_half_angle=config.fov_half_angle,
            min_room_dimension=config.min_room_dimension,
        )
        self.task = CoinTask(
            coins_per_room=config.coins_per_room,
            collect_radius=config.collect_radius,
            margin=COIN_MARGIN,
        )
        self._coin_rng = stream(config.seed, "coin-spawn")
        self.tick = 0
        self.trace: list[RedirectionEvent] = list(init_events)
        self.input_log: list[AppliedInput] = []
        self._spawn_coins(start)

    def _spawn_coins(self, room_id: str) -> None:
        room = self.layout.rooms[room_id]
        placed = self.task.spawn(room.width, room.depth, self._coin_rng)
        if placed < self.task.coins_per_room:
            logger.warning(
                "room %s too small for %d coins with a %.1f m margin; placed %d",
                room_id, self.task.coins_per_room, self.task.margin, placed,
            )

    def observation(self) -> Observation:
        room = self.layout.rooms[self.state.current_room]
        doors = []
        for door in self.layout.doors_of(room.id):
            seg = door_segment_current(self.layout, door, room.id)
            mid = Vec2((seg.a.x + seg.b.x) / 2.0, (seg.a.y + seg.b.y) / 2.0)
            doors.append(DoorView(id=door.id, state=door.state, side=door.side_for(room.id), midpoint=mid))
        return Observation(
            tick=self.tick,
            pose=self.pose,
            room_id=room.id,
            room_rect=room.current_rect,
            phase=self.state.phase,
            coins=self.task.tracked_positions(room.current_rect),
            doors=tuple(doors),
            dt=self.config.dt,
            speed_cap=self.config.speed_cap,
            turn_cap=self.config.turn_cap,
        )

    def _clamp_action(self, action: Action) -> Action:
        max_move = self.config.speed_cap * self.config.dt
        move = action.move
        n = move.norm()
        if n > max_move:
            move = move.scaled(max_move / n)
        max_turn = self.config.turn_cap * self.config.dt
        turn = min(max(action.turn, -max_turn), max_turn)
        return Action(move=move, turn=turn, door_command=action.door_command)

    def _move_pose(self, move: Vec2) -> Vec2:
        """Walls are solid except where an open door spans the crossing point."""
        pos = self.pose.position
        target = pos + move
        rect = self.layout.rooms[self.state.current_room].current_rect
        if contains(rect, target):
            return target
        # Earliest wall plane crossed on the way out.
        exit_side: Side | None = None
        exit_t = math.inf
        for side, bound, delta, coord in (
            (Side.NORTH, rect.max_y, move.y, pos.y),
            (Side.EAST, rect.max_x, move.x, pos.x),
            (Side.SOUTH, rect.min_y, move.y, pos.y),
            (Side.WEST, rect.min_x, move.x, pos.x),
        ):
            outward = delta > 0 if side in (Side.NORTH, Side.EAST) else delta < 0
            past = (coord + delta > bound) if side in (Side.NORTH, Side.EAST) else (coord + delta < bound)
            if outward and past:
                t = (bound - coord) / delta
                if t < exit_t:
                    exit_t, exit_side = t, side
        if exit_side is not None:
            cx = pos.x + exit_t * move.x
            cy = pos.y + exit_t * move.y
            tangent = cx if exit_side in (Side.NORTH, Side.SOUTH) else cy
            for door in self.layout.doors_of(self.state.current_room):
                if door.state is not DoorState.OPEN or door.side_for(self.state.current_room) is not exit_side:
                    continue
                seg = door_segment_current(self.layout, door, self.state.current_room)
                lo = min(seg.a.x, seg.b.x) if exit_side in (Side.NORTH, Side.SOUTH) else min(seg.a.y, seg.b.y)
                hi = max(seg.a.x, seg.b.x) if exit_side in (Side.NORTH, Side.SOUTH) else max(seg.a.y, seg.b.y)
                if lo <= tangent <= hi:
                    return target  # through the doorway
        return Vec2(
            min(max(target.x, rect.min_x), rect.max_x),
            min(max(target.y, rect.min_y), rect.max_y),
        )

    def step(self, action: Action) -> list[RedirectionEvent]:
        self.tick += 1
        action = self._clamp_action(action)
        heading = normalize_angle(self.pose.heading + action.turn)
        position = self._move_pose(action.move)
        self.pose = UserPose(position, heading)
        door_cmds = [(action.door_command[0], action.door_command[1])] if action.door_command else []
        self.input_log.append(AppliedInput(
            tick=self.tick,
            move=(action.move.x, action.move.y),
            turn=action.turn,
            door=(action.door_command[0], action.door_command[1].value) if action.door_command else None,
        ))
        events = nav_tick(self.state, self.pose, door_cmds, self.tick)
        entered = any(e.kind is EventKind.ENTER_ROOM for e in events)
        if entered:
            self._spawn_coins(self.state.current_room)
        room = self.layout.rooms[self.state.current_room]
        for _ in self.task.collect_at(self.pose.position, room.current_rect):
            self.state.event_seq += 1
            events.append(RedirectionEvent(
                tick=self.tick, kind=EventKind.COIN, room=room.id, wall=None,
                t_before=None, t_after=None, gain=None, displacement=None,
                pos=(self.pose.position.x, self.pose.position.y), heading=self.pose.heading,
            ))
        self.trace.extend(events)
        return events


@dataclass(frozen=True)
class RunMetrics:
    ticks: int  # last eventful tick + 1; a trace-derived quantity
    rooms_visited: int
    restore_completions: int
    mean_restore_epochs: float
    max_restore_epochs: int
    total_wall_displacement: float
    boundary_violations: int
    gain_violations: int
    coins_collected: int

    def to_json_obj(self) -> dict:
        return {
            "ticks": self.ticks,
            "rooms_visited": self.rooms_visited,
            "restore_completions": self.restore_completions,
            "mean_restore_epochs": self.mean_restore_epochs,
            "max_restore_epochs": self.max_restore_epochs,
            "total_wall_displacement": self.total_wall_displacement,
            "boundary_violations": self.boundary_violations,
            "gain_violations": self.gain_violations,
            "coins_collected": self.coins_collected,
        }


def run_session(config: RunConfig, layout: VirtualLayout | None = None) -> SimSession:
    """Drive a full policy-controlled session and return it, trace and all."""
    layout = layout if layout is not None else load_layout(config.layout_path)
    session = SimSession(config, layout)
    policy: Policy = make_policy(config.policy, {}, stream(config.seed, "policy"))
    for _ in range(config.ticks):
        session.step(policy.step(session.observation()))
    return session


def run(config: RunConfig, layout: VirtualLayout | None = None) -> tuple[RunMetrics, list[RedirectionEvent]]:
    """Execute a full policy-driven run; returns (metrics, trace)."""
    session = run_session(config, layout)
    return metrics_from_trace(session.trace), session.trace


def replay(config: RunConfig, inputs: Sequence[AppliedInput], layout: VirtualLayout | None = None) -> tuple[RunMetrics, list[RedirectionEvent]]:
    """Re-drive a session from a recorded input log; byte-identical trace."""
    layout = layout if layout is not None else load_layout(config.layout_path)
    session = SimSession(config, layout)
    for entry in inputs:
        door = None
        if entry.door is not None:
            door = (entry.door[0], DoorState(entry.door[1]))
        session.step(Action(move=Vec2(entry.move[0], entry.move[1]), turn=entry.turn, door_command=door))
    return metrics_from_trace(session.trace), session.trace


# ---------- trace serialization ----------


def event_to_line(event: RedirectionEvent) -> str:
    return json.dumps(event.to_json_obj(), separators=(",", ":"))


def trace_to_text(events: Iterable[RedirectionEvent]) -> str:
    return "".join(event_to_line(e) + "\n" for e in events)


def write_trace(path: str, events: Iterable[RedirectionEvent]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(trace_to_text(events))


def load_trace(path: str) -> list[dict]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError as e:
                raise ValueError(f"trace line {lineno}: invalid JSON: {e.msg}") from None
    return out


def write_input_log(path: str, inputs: Iterable[AppliedInput]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for entry in inputs:
            fh.write(json.dumps(entry.to_json_obj(), separators=(",", ":")) + "\n")


def load_input_log(path: str) -> list[AppliedInput]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                door = tuple(obj["door"]) if obj.get("door") else None
                out.append(AppliedInput(
                    tick=int(obj["tick"]),
                    move=(float(obj["move"][0]), float(obj["move"][1])),
                    turn=float(obj["turn"]),
                    door=door,  # type: ignore[arg-type]
                ))
            except (KeyError, TypeError, ValueError, json.JSONDecodeError) as e:
                raise ValueError(f"input log line {lineno}: {e}") from None
    return out


# ---------- metrics ----------


def metrics_from_trace(events: Sequence[RedirectionEvent]) -> RunMetrics:
    """Recompute run metrics from events alone."""
    if not events:
        return RunMetrics(0, 0, 0, 0.0, 0, 0.0, 0, 0, 0)
    rooms: set[str] = set()
    completions = 0
    total_disp = 0.0
    boundary = 0
    gain_v = 0
    coins = 0
    # Epoch counting: within one entry span, a wall's epoch is a maximal run
    # of RestoreStep events at consecutive ticks (a wall moves every tick of
    # an epoch until its budget or goal is exhausted).
    span = -1
    span_epochs: dict[int, int] = {}
    span_completed: set[int] = set()
    last_step_tick: dict[tuple[int, str], int] = {}
    for e in events:
        if e.kind is EventKind.ENTER_ROOM:
            rooms.add(e.room or "")
            span += 1
        elif e.kind is EventKind.RESTORE_COMPLETE:
            completions += 1
            span_completed.add(span)
        elif e.kind is EventKind.RESTORE_STEP:
            total_disp += abs(e.displacement or 0.0)
            key = (span, e.wall or "")
            if last_step_tick.get(key) != e.tick - 1:
                span_epochs[span] = span_epochs.get(span, 0) + 1
            last_step_tick[key] = e.tick
        elif e.kind is EventKind.COMPRESS:
            total_disp += abs(e.displacement or 0.0)
        elif e.kind is EventKind.COIN:
            coins += 1
        elif e.kind is EventKind.VIOLATION:
            reason = e.wall or ""
            if reason.startswith("boundary:"):
                boundary += 1
            elif reason.startswith("gain:"):
                gain_v += 1
    completed_epochs = [span_epochs.get(s, 0) for s in sorted(span_completed)]
    mean_epochs = sum(completed_epochs) / len(completed_epochs) if completed_epochs else 0.0
    max_epochs = max(completed_epochs) if completed_epochs else 0
    return RunMetrics(
        ticks=events[-1].tick + 1,
        rooms_visited=len(rooms),
        restore_completions=completions,
        mean_restore_epochs=mean_epochs,
        max_restore_epochs=max_epochs,
        total_wall_displacement=total_disp,
        boundary_violations=boundary,
        gain_violations=gain_v,
        coins_collected=coins,
    )


# ---------- independent invariant checking ----------


@dataclass(frozen=True)
class TraceViolation:
    kind: str  # boundary | gain_bound | in_view_movement | containment | trace_inconsistent | malformed
    tick: int
    message: str


_KINDS = {k.value for k in EventKind}


def _bounds_segment(bounds: list[float], side: Side) -> WallSegment:
    min_x, min_y, max_x, max_y = bounds
    if side is Side.NORTH:
        return WallSegment(Vec2(max_x, max_y), Vec2(min_x, max_y), side)
    if side is Side.EAST:
        return WallSegment(Vec2(max_x, min_y), Vec2(max_x, max_y), side)
    if side is Side.SOUTH:
        return WallSegment(Vec2(min_x, min_y), Vec2(max_x, min_y), side)
    return WallSegment(Vec2(min_x, max_y), Vec2(min_x, min_y), side)


def check_trace_invariants(
    trace: Sequence[dict],
    layout: VirtualLayout,
    thresholds: GainThresholds = DEFAULT_THRESHOLDS,
    fov_half_angle: float = DEFAULT_FOV_HALF_ANGLE,
) -> list[TraceViolation]:
    """Audit a trace against the safety contract, independently of the engine.

    Wall geometry is rebuilt from the layout's untouched virtual rectangles by
    applying logged displacements; distances, visibility, and gain bounds are
    re-derived from that geometry and the threshold table. Checks: every
    logged position inside the tracked space; every RestoreStep within the
    gain band at its pre-move distance, with logged distances matching the
    replayed geometry; no RestoreStep on a wall that was not fully out of
    view; all current-room neighbors inside the tracked space after each
    Compress batch.
    """
    real = layout.real.rect
    out: list[TraceViolation] = []
    bounds: dict[str, list[float]] = {
        rid: [room.virtual_rect.min_x, room.virtual_rect.min_y, room.virtual_rect.max_x, room.virtual_rect.max_y]
        for rid, room in layout.rooms.items()
    }
    current_room: str | None = None
    last_tick = -1
    compress_ticks: set[int] = set()

    def containment_check(tick: int) -> None:
        if current_room is None:
            return
        for nb in sorted(neighbors(layout, current_room)):
            b = bounds[nb]
            if b[0] < real.min_x - 1e-9 or b[1] < real.min_y - 1e-9 or b[2] > real.max_x + 1e-9 or b[3] > real.max_y + 1e-9:
                out.append(TraceViolation(
                    "containment", tick,
                    f"neighbor {nb!r} [{b[0]:.6f},{b[1]:.6f},{b[2]:.6f},{b[3]:.6f}] outside the tracked space",
                ))

    pending_containment_tick: int | None = None
    for i, obj in enumerate(trace):
        if not isinstance(obj, dict) or not _KINDS.issuperset({obj.get("kind")}) or "tick" not in obj:
            out.append(TraceViolation("malformed", last_tick, f"line {i + 1}: not a recognizable event"))
            continue
        tick = obj["tick"]
        if not isinstance(tick, int) or tick < last_tick:
            out.append(TraceViolation("malformed", last_tick, f"line {i + 1}: ticks must be non-decreasing"))
            continue
        if pending_containment_tick is not None and tick > pending_containment_tick:
            containment_check(pending_containment_tick)
            pending_containment_tick = None
        last_tick = tick
        kind = obj["kind"]
        pos = obj.get("pos")
        if (
            not isinstance(pos, list) or len(pos) != 2
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in pos)
        ):
            out.append(TraceViolation("malformed", tick, f"line {i + 1}: bad pos"))
            continue
        px, py = float(pos[0]), float(pos[1])
        if not (real.min_x - 1e-9 <= px <= real.max_x + 1e-9 and real.min_y - 1e-9 <= py <= real.max_y + 1e-9):
            out.append(TraceViolation("boundary", tick, f"position ({px:.4f}, {py:.4f}) outside the tracked space"))

        if kind == "EnterRoom":
            if obj.get("room") in bounds:
                current_room = obj["room"]
            continue
        if kind == "Compress":
            room_id = obj.get("room")
            side_raw = obj.get("wall")
            d = obj.get("displacement")
            if room_id not in bounds or side_raw not in {s.value for s in SIDES} or not isinstance(d, (int, float)):
                out.append(TraceViolation("malformed", tick, f"line {i + 1}: bad Compress event"))
                continue
            _apply_displacement(bounds[room_id], Side(side_raw), float(d))
            pending_containment_tick = tick
            compress_ticks.add(tick)
            continue
        if kind == "RestoreStep":
            room_id = obj.get("room")
            side_raw = obj.get("wall")
            if room_id not in bounds or side_raw not in {s.value for s in SIDES}:
                out.append(TraceViolation("malformed", tick, f"line {i + 1}: bad RestoreStep event"))
                continue
            side = Side(side_raw)
            b = bounds[room_id]
            seg_before = _bounds_segment(b, side)
            pose = UserPose(Vec2(px, py), float(obj.get("heading", 0.0)))
            if not fully_outside_fov(pose, seg_before, fov_half_angle):
                out.append(TraceViolation(
                    "in_view_movement", tick,
                    f"{room_id}/{side.value} moved while inside the view cone",
                ))
            t_b = obj.get("t_before")
            t_a = obj.get("t_after")
            g = obj.get("gain")
            d = obj.get("displacement")
            if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in (t_b, t_a, g, d)):
                out.append(TraceViolation("malformed", tick, f"line {i + 1}: RestoreStep missing numeric fields"))
                continue
            t_b_replay = shortest_distance(pose.position, seg_before)
            _apply_displacement(b, side, float(d))
            t_a_replay = shortest_distance(pose.position, _bounds_segment(b, side))
            if abs(t_b_replay - t_b) > 1e-6 or abs(t_a_replay - t_a) > 1e-6:
                out.append(TraceViolation(
                    "trace_inconsistent", tick,
                    f"{room_id}/{side.value}: logged distances ({t_b:.6f}, {t_a:.6f}) do not match "
                    f"replayed geometry ({t_b_replay:.6f}, {t_a_replay:.6f})",
                ))
            lower, _, upper = thresholds_at(thresholds, float(t_b)) if t_b > 0 else (1.0, 1.0, 1.0)
            effective = (t_a / t_b) if t_b > 0 else math.inf
            ok = (
                t_b > 0
                and lower - 1e-9 <= g <= upper + 1e-9
                and lower - 1e-9 <= effective <= upper + 1e-9
                and abs(effective - g) <= 1e-9
            )
            if not ok:
                out.append(TraceViolation(
                    "gain_bound", tick,
                    f"{room_id}/{side.value}: gain {g} (effective {effective:.6f}) outside "
                    f"[{lower:.6f}, {upper:.6f}] at distance {t_b}",
                ))
            continue
        # Remaining kinds carry no geometry to replay.
    if pending_containment_tick is not None:
        containment_check(pending_containment_tick)
    return out


def _apply_displacement(bounds: list[float], side: Side, d: float) -> None:
    if side is Side.NORTH:
        bounds[3] += d
    elif side is Side.EAST:
        bounds[2] += d
    elif side is Side.SOUTH:
        bounds[1] += d
    else:
        bounds[0] += d
