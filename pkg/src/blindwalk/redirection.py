"""Out-of-view wall manipulation: restore and compress phases.

The engine keeps one active (current) room per user. While the user is inside
it, walls that fall fully outside the view cone creep back toward the room's
original dimensions centered on the tracked space (restore). Every move is
bounded by the detection-threshold gain band for the user's current distance
to that wall, and each continuous out-of-view interval of a wall gets a single
displacement budget sampled when the wall leaves view, so repeated small moves
cannot compound into a noticeable one.

Once the room has been restored and its doors are closed, every neighbor is
abruptly re-seated against the room's walls and any neighbor wall that falls
completely outside the tracked space is clamped flush onto its boundary
(compress). Compressed rooms are what the user enters next; entering restarts
the cycle with the roles swapped.

All wall mutations emit events; a trace of those events is sufficient to
replay every rectangle in the run (placements are logged as per-wall Compress
displacements, and walls always apply exactly the logged displacement).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .gain import Direction, GainThresholds, max_imperceptible_step
from .geometry import (
    DEFAULT_FOV_HALF_ANGLE,
    Rect,
    SIDES,
    Side,
    UserPose,
    Vec2,
    WallSegment,
    contains,
    fully_outside_fov,
    nearest_parallel_side,
    shortest_distance,
    wall_segment,
)
from .layout import Door, DoorState, RealSpace, Room, VirtualLayout, neighbors

# Convergence guard: a restore is complete when every wall is within this of
# its goal coordinate (meters).
RESTORE_EPS = 1e-4

# Compression floor: a room is never squeezed below this dimension (meters).
MIN_ROOM_DIMENSION = 0.5

_EPS = 1e-9
_TINY = 1e-15


class Phase(Enum):
    RESTORING = "restoring"
    COMPRESSED = "compressed"


class EventKind(str, Enum):
    ENTER_ROOM = "EnterRoom"
    RESTORE_STEP = "RestoreStep"
    RESTORE_COMPLETE = "RestoreComplete"
    COMPRESS = "Compress"
    DOOR_OPEN = "DoorOpen"
    DOOR_CLOSE = "DoorClose"
    VIOLATION = "Violation"
    COIN = "Coin"


@dataclass(frozen=True)
class RedirectionEvent:
    """One trace line. For door events `wall` carries the door id; for
    violations it carries a machine-readable reason code."""

    tick: int
    kind: EventKind
    room: str | None
    wall: str | None
    t_before: float | None
    t_after: float | None
    gain: float | None
    displacement: float | None
    pos: tuple[float, float]
    heading: float

    def to_json_obj(self) -> dict:
        return {
            "tick": self.tick,
            "kind": self.kind.value,
            "room": self.room,
            "wall": self.wall,
            "t_before": self.t_before,
            "t_after": self.t_after,
            "gain": self.gain,
            "displacement": self.displacement,
            "pos": [self.pos[0], self.pos[1]],
            "heading": self.heading,
        }


@dataclass(frozen=True)
class RestoreTarget:
    """Goal placement fixed at room entry: scale and translation that map the
    entry rect back to original dimensions centered on the tracked space."""

    scale: Vec2
    translation: Vec2
    goal: Rect

    @property
    def is_identity(self) -> bool:
        return (
            abs(self.scale.x - 1.0) < _EPS
            and abs(self.scale.y - 1.0) < _EPS
            and abs(self.translation.x) < _EPS
            and abs(self.translation.y) < _EPS
        )


@dataclass
class _Epoch:
    start_distance: float
    spent: float = 0.0


@dataclass
class NavState:
    layout: VirtualLayout
    real: RealSpace
    thresholds: GainThresholds
    fov_half_angle: float
    min_room_dimension: float
    current_room: str
    phase: Phase
    target: RestoreTarget
    epochs: dict[tuple[str, Side], _Epoch] = field(default_factory=dict)
    tick_entered: int = 0
    restore_complete_logged: bool = False
    event_seq: int = 0

    def _emit(self, events: list[RedirectionEvent], event: RedirectionEvent) -> None:
        self.event_seq += 1
        events.append(event)


def compute_restore_target(room: Room, o_c: Vec2) -> RestoreTarget:
    """Scale/translation returning `room` from its placement at entry to its
    original dimensions centered at o_c."""
    cur = room.current_rect
    scale = Vec2(room.width / cur.width, room.depth / cur.depth)
    translation = o_c - cur.center
    goal = Rect(o_c, room.width / 2.0, room.depth / 2.0)
    return RestoreTarget(scale=scale, translation=translation, goal=goal)


def restore_remaining(state: NavState) -> dict[Side, float]:
    """Signed world-axis distance from each wall to its goal coordinate."""
    cur = state.layout.rooms[state.current_room].current_rect
    return {side: state.target.goal.side_coord(side) - cur.side_coord(side) for side in SIDES}


def _converged(state: NavState) -> bool:
    return max(abs(d) for d in restore_remaining(state).values()) < RESTORE_EPS


def _move_wall(room: Room, side: Side, displacement: float) -> None:
    # Always apply the logged displacement verbatim so trace replay is
    # bit-exact.
    r = room.current_rect
    min_x, max_x, min_y, max_y = r.min_x, r.max_x, r.min_y, r.max_y
    if side is Side.NORTH:
        max_y += displacement
    elif side is Side.EAST:
        max_x += displacement
    elif side is Side.SOUTH:
        min_y += displacement
    else:
        min_x += displacement
    room.current_rect = Rect.from_bounds(min_x, min_y, max_x, max_y)


def init_navigation(
    layout: VirtualLayout,
    start_room: str,
    thresholds: GainThresholds,
    pose: UserPose,
    fov_half_angle: float = DEFAULT_FOV_HALF_ANGLE,
    min_room_dimension: float = MIN_ROOM_DIMENSION,
) -> tuple[NavState, list[RedirectionEvent]]:
    """Seat the start room centered in the tracked space, compress all its
    neighbors, and hand back a ready NavState (phase Compressed)."""
    if start_room not in layout.rooms:
        raise KeyError(f"unknown start room {start_room!r}")
    room = layout.rooms[start_room]
    o_c = layout.real.rect.center if layout.real is not None else Vec2(0.0, 0.0)
    state = NavState(
        layout=layout,
        real=layout.real,
        thresholds=thresholds,
        fov_half_angle=fov_half_angle,
        min_room_dimension=min_room_dimension,
        current_room=start_room,
        phase=Phase.RESTORING,
        target=compute_restore_target(room, o_c),
    )
    events: list[RedirectionEvent] = []
    state._emit(events, RedirectionEvent(
        tick=0, kind=EventKind.ENTER_ROOM, room=start_room, wall=None,
        t_before=None, t_after=None, gain=None, displacement=None,
        pos=(pose.position.x, pose.position.y), heading=pose.heading,
    ))
    # Abrupt initial placement, logged per wall so replays can rebuild it.
    goal = Rect(o_c, room.width / 2.0, room.depth / 2.0)
    for side in SIDES:
        d = goal.side_coord(side) - room.current_rect.side_coord(side)
        if abs(d) > _TINY:
            state._emit(events, RedirectionEvent(
                tick=0, kind=EventKind.COMPRESS, room=start_room, wall=side.value,
                t_before=None, t_after=None, gain=None, displacement=d,
                pos=(pose.position.x, pose.position.y), heading=pose.heading,
            ))
            _move_wall(room, side, d)
    state.target = compute_restore_target(room, o_c)
    state.restore_complete_logged = True  # nothing to restore at init
    events.extend(compress_neighbors(state, pose, tick=0))
    return state, events


def on_room_enter(
    state: NavState, room_id: str, pose: UserPose, tick: int, events: list[RedirectionEvent]
) -> None:
    """Switch the active room to room_id and fix its restore target.

    Protocol deviations (entering a non-neighbor, entering through closed
    doors, or entering while the previous restore is unfinished) log a
    Violation but the switch still happens: the engine follows the user.
    """
    pos = (pose.position.x, pose.position.y)
    if room_id not in neighbors(state.layout, state.current_room):
        state._emit(events, RedirectionEvent(
            tick=tick, kind=EventKind.VIOLATION, room=room_id, wall="entry:not_neighbor",
            t_before=None, t_after=None, gain=None, displacement=None, pos=pos, heading=pose.heading,
        ))
    else:
        connecting = [
            d for d in state.layout.doors_of(state.current_room)
            if d.other(state.current_room) == room_id and d.state is DoorState.OPEN
        ]
        if not connecting:
            state._emit(events, RedirectionEvent(
                tick=tick, kind=EventKind.VIOLATION, room=room_id, wall="entry:door_closed",
                t_before=None, t_after=None, gain=None, displacement=None, pos=pos, heading=pose.heading,
            ))
    if state.phase is not Phase.COMPRESSED:
        state._emit(events, RedirectionEvent(
            tick=tick, kind=EventKind.VIOLATION, room=room_id, wall="entry:not_compressed",
            t_before=None, t_after=None, gain=None, displacement=None, pos=pos, heading=pose.heading,
        ))
    room = state.layout.rooms[room_id]
    state.current_room = room_id
    state.phase = Phase.RESTORING
    state.target = compute_restore_target(room, state.real.rect.center)
    state.epochs.clear()
    state.tick_entered = tick
    state.restore_complete_logged = False
    state._emit(events, RedirectionEvent(
        tick=tick, kind=EventKind.ENTER_ROOM, room=room_id, wall=None,
        t_before=None, t_after=None, gain=None, displacement=None, pos=pos, heading=pose.heading,
    ))


def restore_step(state: NavState, pose: UserPose, tick: int) -> list[RedirectionEvent]:
    """Move every out-of-view wall of the current room toward its goal.

    Each move is capped three ways: the remaining distance to the goal, the
    remaining budget of the wall's current out-of-view epoch (sampled from the
    user-wall distance when the wall left view), and the instantaneous band
    for the distance right now (which protects the per-move gain bound when
    the user has approached the wall mid-epoch).
    """
    events: list[RedirectionEvent] = []
    room = state.layout.rooms[state.current_room]
    pos = (pose.position.x, pose.position.y)
    if not contains(room.current_rect, pose.position, eps=_EPS):
        state._emit(events, RedirectionEvent(
            tick=tick, kind=EventKind.VIOLATION, room=room.id, wall="boundary:outside_room",
            t_before=None, t_after=None, gain=None, displacement=None, pos=pos, heading=pose.heading,
        ))
        return events
    for side in SIDES:
        seg = wall_segment(room.current_rect, side)
        key = (room.id, side)
        if not fully_outside_fov(pose, seg, state.fov_half_angle):
            state.epochs.pop(key, None)  # epoch ends; budget refreshes next time
            continue
        remaining = state.target.goal.side_coord(side) - room.current_rect.side_coord(side)
        adist = abs(remaining)
        if adist < _TINY:
            continue
        epoch = state.epochs.get(key)
        if epoch is None:
            epoch = _Epoch(start_distance=shortest_distance(pose.position, seg))
            state.epochs[key] = epoch
        step_sign = 1.0 if remaining > 0.0 else -1.0
        outward = 1.0 if side in (Side.NORTH, Side.EAST) else -1.0
        direction = Direction.AWAY if step_sign == outward else Direction.TOWARD
        if epoch.start_distance <= 0.0:
            continue  # wall left view while touching the user; wait for a fresh epoch
        budget_left = max_imperceptible_step(state.thresholds, epoch.start_distance, direction) - epoch.spent
        if budget_left <= _TINY:
            continue
        t_before = shortest_distance(pose.position, seg)
        if t_before <= 0.0:
            continue
        inst_cap = max_imperceptible_step(state.thresholds, t_before, direction)
        step = min(adist, budget_left, inst_cap)
        if step <= _TINY:
            continue
        displacement = step_sign * step
        _move_wall(room, side, displacement)
        t_after = shortest_distance(pose.position, wall_segment(room.current_rect, side))
        epoch.spent += step
        state._emit(events, RedirectionEvent(
            tick=tick, kind=EventKind.RESTORE_STEP, room=room.id, wall=side.value,
            t_before=t_before, t_after=t_after, gain=t_after / t_before,
            displacement=displacement, pos=pos, heading=pose.heading,
        ))
    return events


def _segment_completely_outside(r: Rect, seg: WallSegment) -> bool:
    lo_x, hi_x = min(seg.a.x, seg.b.x), max(seg.a.x, seg.b.x)
    lo_y, hi_y = min(seg.a.y, seg.b.y), max(seg.a.y, seg.b.y)
    return (
        lo_x > r.max_x + _EPS
        or hi_x < r.min_x - _EPS
        or lo_y > r.max_y + _EPS
        or hi_y < r.min_y - _EPS
    )


def _compressed_bounds(
    state: NavState, target: Rect
) -> tuple[dict[Side, float], list[Side]]:
    """Clamp a placed neighbor's walls into the tracked space.

    Walls are visited in fixed order; a wall completely outside the space
    moves flush onto the nearest parallel boundary, stopping early at the
    minimum-dimension floor (reported per wall).
    """
    r = state.real.rect
    bounds = {
        Side.NORTH: target.max_y,
        Side.EAST: target.max_x,
        Side.SOUTH: target.min_y,
        Side.WEST: target.min_x,
    }
    floor = state.min_room_dimension
    breaches: list[Side] = []
    for side in SIDES:
        rect_now = Rect.from_bounds(bounds[Side.WEST], bounds[Side.SOUTH], bounds[Side.EAST], bounds[Side.NORTH])
        seg = wall_segment(rect_now, side)
        if not _segment_completely_outside(r, seg):
            continue
        near, _ = nearest_parallel_side(r, seg)
        goal = r.side_coord(near)
        if side is Side.NORTH:
            limit = bounds[Side.SOUTH] + floor
            if goal < limit - _EPS:
                goal = limit
                breaches.append(side)
        elif side is Side.SOUTH:
            limit = bounds[Side.NORTH] - floor
            if goal > limit + _EPS:
                goal = limit
                breaches.append(side)
        elif side is Side.EAST:
            limit = bounds[Side.WEST] + floor
            if goal < limit - _EPS:
                goal = limit
                breaches.append(side)
        else:
            limit = bounds[Side.EAST] - floor
            if goal > limit + _EPS:
                goal = limit
                breaches.append(side)
        bounds[side] = goal
    return bounds, breaches


def compress_neighbors(state: NavState, pose: UserPose, tick: int) -> list[RedirectionEvent]:
    """Re-seat every neighbor of the current room against its restored walls
    and clamp them into the tracked space.

    Requires all current-room doors closed (the rooms being teleported must be
    hidden); with a door still open the batch is deferred and a Violation
    records it. The emitted per-wall displacements are net (placement plus
    clamp), so calling twice without intervening movement emits nothing.
    """
    events: list[RedirectionEvent] = []
    cur = state.layout.rooms[state.current_room]
    pos = (pose.position.x, pose.position.y)
    open_doors = [d for d in state.layout.doors_of(cur.id) if d.state is DoorState.OPEN]
    if open_doors:
        state._emit(events, RedirectionEvent(
            tick=tick, kind=EventKind.VIOLATION, room=cur.id, wall="compress:deferred",
            t_before=None, t_after=None, gain=None, displacement=None, pos=pos, heading=pose.heading,
        ))
        return events
    translation = cur.current_rect.center - cur.virtual_rect.center
    for nb_id in sorted(neighbors(state.layout, cur.id)):
        q = state.layout.rooms[nb_id]
        seated = Rect(q.virtual_rect.center + translation, q.virtual_rect.half_w, q.virtual_rect.half_d)
        bounds, breaches = _compressed_bounds(state, seated)
        for side in breaches:
            state._emit(events, RedirectionEvent(
                tick=tick, kind=EventKind.VIOLATION, room=nb_id, wall=f"floor:{side.value}",
                t_before=None, t_after=None, gain=None, displacement=None, pos=pos, heading=pose.heading,
            ))
        moved = False
        for side in SIDES:
            d = bounds[side] - q.current_rect.side_coord(side)
            if abs(d) > _TINY:
                moved = True
                state._emit(events, RedirectionEvent(
                    tick=tick, kind=EventKind.COMPRESS, room=nb_id, wall=side.value,
                    t_before=None, t_after=None, gain=None, displacement=d, pos=pos, heading=pose.heading,
                ))
        if moved:
            # One assignment, not wall-by-wall: a large re-seat can pass
            # through a zero-width intermediate if applied a side at a time.
            q.current_rect = Rect.from_bounds(
                bounds[Side.WEST], bounds[Side.SOUTH], bounds[Side.EAST], bounds[Side.NORTH]
            )
    state.phase = Phase.COMPRESSED
    return events


def nav_tick(
    state: NavState,
    pose: UserPose,
    door_commands: list[tuple[str, DoorState]],
    tick: int,
) -> list[RedirectionEvent]:
    """One engine step: door commands, entry detection, restore, compress."""
    events: list[RedirectionEvent] = []
    pos = (pose.position.x, pose.position.y)

    if not contains(state.real.rect, pose.position, eps=_EPS):
        state._emit(events, RedirectionEvent(
            tick=tick, kind=EventKind.VIOLATION, room=state.current_room, wall="boundary:outside_real",
            t_before=None, t_after=None, gain=None, displacement=None, pos=pos, heading=pose.heading,
        ))

    # Doors swing shut one tick after entry so compression is never held up
    # by the door the user came through.
    if tick == state.tick_entered + 1:
        for door in state.layout.doors_of(state.current_room):
            if door.state is DoorState.OPEN:
                door.state = DoorState.CLOSED
                state._emit(events, RedirectionEvent(
                    tick=tick, kind=EventKind.DOOR_CLOSE, room=state.current_room, wall=door.id,
                    t_before=None, t_after=None, gain=None, displacement=None, pos=pos, heading=pose.heading,
                ))

    for door_id, desired in door_commands:
        try:
            door = state.layout.door_by_id(door_id)
        except KeyError:
            door = None
        if door is None or state.current_room not in (door.room_a, door.room_b):
            state._emit(events, RedirectionEvent(
                tick=tick, kind=EventKind.VIOLATION, room=state.current_room, wall=f"door:invalid:{door_id}",
                t_before=None, t_after=None, gain=None, displacement=None, pos=pos, heading=pose.heading,
            ))
            continue
        if door.state is not desired:
            door.state = desired
            kind = EventKind.DOOR_OPEN if desired is DoorState.OPEN else EventKind.DOOR_CLOSE
            state._emit(events, RedirectionEvent(
                tick=tick, kind=kind, room=state.current_room, wall=door.id,
                t_before=None, t_after=None, gain=None, displacement=None, pos=pos, heading=pose.heading,
            ))

    current_rect = state.layout.rooms[state.current_room].current_rect
    if not contains(current_rect, pose.position, eps=_EPS):
        candidates = [
            rid for rid, room in state.layout.rooms.items()
            if rid != state.current_room and contains(room.current_rect, pose.position, eps=_EPS)
        ]
        nbs = neighbors(state.layout, state.current_room)
        candidates.sort(key=lambda rid: (rid not in nbs, rid))
        if candidates:
            on_room_enter(state, candidates[0], pose, tick, events)
        else:
            state._emit(events, RedirectionEvent(
                tick=tick, kind=EventKind.VIOLATION, room=state.current_room, wall="boundary:outside_rooms",
                t_before=None, t_after=None, gain=None, displacement=None, pos=pos, heading=pose.heading,
            ))

    if state.phase is Phase.RESTORING:
        events.extend(restore_step(state, pose, tick))
        if _converged(state):
            if not state.restore_complete_logged:
                state.restore_complete_logged = True
                state._emit(events, RedirectionEvent(
                    tick=tick, kind=EventKind.RESTORE_COMPLETE, room=state.current_room, wall=None,
                    t_before=None, t_after=None, gain=None, displacement=None, pos=pos, heading=pose.heading,
                ))
            if all(d.state is DoorState.CLOSED for d in state.layout.doors_of(state.current_room)):
                events.extend(compress_neighbors(state, pose, tick))
    return events
