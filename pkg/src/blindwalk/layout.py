"""Multi-room virtual layouts and their JSON document form.

A layout document looks like:

    {
      "real_space": {"width": 4.0, "depth": 4.0},
      "rooms": [
        {"id": "hall", "width": 3.0, "depth": 3.0, "x": 0.0, "y": 0.0, "color": "#4477aa"},
        ...
      ],
      "doors": [
        {"a": "hall", "b": "study", "side": "east", "offset": 0.0, "width": 0.9},
        ...
      ]
    }

Units are meters. A room's (x, y) is its center in virtual-map coordinates,
which share the plane of tracked coordinates; the tracked space is centered at
the origin. A door sits on room a's wall named by `side`; `offset` is the
signed distance of the door center from that wall's midpoint along the wall.
Unknown fields are rejected so typos fail loudly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, TextIO

from .geometry import Rect, Side, Vec2, WallSegment

MIN_DOOR_WIDTH = 0.8

_OPPOSITE = {
    Side.NORTH: Side.SOUTH,
    Side.SOUTH: Side.NORTH,
    Side.EAST: Side.WEST,
    Side.WEST: Side.EAST,
}

_EPS = 1e-9


class LayoutError(ValueError):
    """Raised for malformed or structurally invalid layout documents."""


class DoorState(str, Enum):
    OPEN = "open"
    CLOSED = "closed"


@dataclass
class Room:
    id: str
    width: float
    depth: float
    x: float
    y: float
    color: str
    virtual_rect: Rect = field(init=False)
    current_rect: Rect = field(init=False)  # mutated only by the redirection module

    def __post_init__(self) -> None:
        self.virtual_rect = Rect(Vec2(self.x, self.y), self.width / 2.0, self.depth / 2.0)
        self.current_rect = self.virtual_rect


@dataclass
class Door:
    id: str
    room_a: str
    room_b: str
    side: Side  # wall of room_a that carries the door
    offset: float
    width: float
    state: DoorState = DoorState.CLOSED

    def side_for(self, room_id: str) -> Side:
        if room_id == self.room_a:
            return self.side
        if room_id == self.room_b:
            return _OPPOSITE[self.side]
        raise KeyError(f"door {self.id} does not touch room {room_id!r}")

    def other(self, room_id: str) -> str:
        if room_id == self.room_a:
            return self.room_b
        if room_id == self.room_b:
            return self.room_a
        raise KeyError(f"door {self.id} does not touch room {room_id!r}")


@dataclass(frozen=True)
class RealSpace:
    width: float
    depth: float

    @property
    def rect(self) -> Rect:
        return Rect(Vec2(0.0, 0.0), self.width / 2.0, self.depth / 2.0)


@dataclass
class VirtualLayout:
    real: RealSpace
    rooms: dict[str, Room]
    doors: list[Door]

    def doors_of(self, room_id: str) -> list[Door]:
        if room_id not in self.rooms:
            raise KeyError(f"unknown room {room_id!r}")
        return [d for d in self.doors if room_id in (d.room_a, d.room_b)]

    def door_by_id(self, door_id: str) -> Door:
        for d in self.doors:
            if d.id == door_id:
                return d
        raise KeyError(f"unknown door {door_id!r}")


def neighbors(layout: VirtualLayout, room_id: str) -> set[str]:
    """Rooms joined to room_id by at least one door."""
    if room_id not in layout.rooms:
        raise KeyError(f"unknown room {room_id!r}")
    out: set[str] = set()
    for d in layout.doors:
        if d.room_a == room_id:
            out.add(d.room_b)
        elif d.room_b == room_id:
            out.add(d.room_a)
    return out


# ---------- document parsing ----------


def _expect_object(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise LayoutError(f"{path}: expected an object")
    return value


def _expect_list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise LayoutError(f"{path}: expected an array")
    return value


def _reject_unknown(obj: dict, allowed: set[str], path: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise LayoutError(f"{path}: unknown field {sorted(unknown)[0]!r}")


def _number(obj: dict, key: str, path: str, positive: bool = False) -> float:
    if key not in obj:
        raise LayoutError(f"{path}: missing field {key!r}")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise LayoutError(f"{path}.{key}: expected a number")
    v = float(v)
    if positive and v <= 0.0:
        raise LayoutError(f"{path}.{key}: must be positive")
    return v


def _string(obj: dict, key: str, path: str) -> str:
    if key not in obj:
        raise LayoutError(f"{path}: missing field {key!r}")
    v = obj[key]
    if not isinstance(v, str) or not v:
        raise LayoutError(f"{path}.{key}: expected a non-empty string")
    return v


def parse_layout(text: str) -> VirtualLayout:
    """Parse a layout document; rejects structurally invalid input.

    Structural here means: malformed JSON (reported with line/column), wrong
    types, unknown or missing fields, non-positive dimensions, duplicate room
    ids, doors that reference missing rooms or join a room to itself.
    Geometric placement rules are the validator's job, see validate().
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise LayoutError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    doc = _expect_object(doc, "$")
    _reject_unknown(doc, {"real_space", "rooms", "doors"}, "$")

    if "real_space" not in doc:
        raise LayoutError("$: missing field 'real_space'")
    rs_obj = _expect_object(doc["real_space"], "$.real_space")
    _reject_unknown(rs_obj, {"width", "depth"}, "$.real_space")
    real = RealSpace(
        width=_number(rs_obj, "width", "$.real_space", positive=True),
        depth=_number(rs_obj, "depth", "$.real_space", positive=True),
    )

    if "rooms" not in doc:
        raise LayoutError("$: missing field 'rooms'")
    rooms: dict[str, Room] = {}
    for i, item in enumerate(_expect_list(doc["rooms"], "$.rooms")):
        path = f"$.rooms[{i}]"
        obj = _expect_object(item, path)
        _reject_unknown(obj, {"id", "width", "depth", "x", "y", "color"}, path)
        rid = _string(obj, "id", path)
        if rid in rooms:
            raise LayoutError(f"{path}.id: duplicate room id {rid!r}")
        color = obj.get("color", "#888888")
        if not isinstance(color, str):
            raise LayoutError(f"{path}.color: expected a string")
        rooms[rid] = Room(
            id=rid,
            width=_number(obj, "width", path, positive=True),
            depth=_number(obj, "depth", path, positive=True),
            x=_number(obj, "x", path),
            y=_number(obj, "y", path),
            color=color,
        )
    if not rooms:
        raise LayoutError("$.rooms: at least one room required")

    doors: list[Door] = []
    for i, item in enumerate(_expect_list(doc.get("doors", []), "$.doors")):
        path = f"$.doors[{i}]"
        obj = _expect_object(item, path)
        _reject_unknown(obj, {"a", "b", "side", "offset", "width"}, path)
        a = _string(obj, "a", path)
        b = _string(obj, "b", path)
        for ref in (a, b):
            if ref not in rooms:
                raise LayoutError(f"{path}: door references missing room {ref!r}")
        if a == b:
            raise LayoutError(f"{path}: door joins room {a!r} to itself")
        side_raw = _string(obj, "side", path)
        try:
            side = Side(side_raw)
        except ValueError:
            raise LayoutError(f"{path}.side: unknown side {side_raw!r}") from None
        doors.append(
            Door(
                id=f"d{i}",
                room_a=a,
                room_b=b,
                side=side,
                offset=_number(obj, "offset", path),
                width=_number(obj, "width", path, positive=True),
            )
        )
    return VirtualLayout(real=real, rooms=rooms, doors=doors)


def load_layout(path: str) -> VirtualLayout:
    with open(path, encoding="utf-8") as fh:
        return parse_layout(fh.read())


def serialize_layout(layout: VirtualLayout) -> str:
    """Canonical document form; parse(serialize(x)) == freshly parsed x."""
    doc = {
        "real_space": {"width": layout.real.width, "depth": layout.real.depth},
        "rooms": [
            {"id": r.id, "width": r.width, "depth": r.depth, "x": r.x, "y": r.y, "color": r.color}
            for r in layout.rooms.values()
        ],
        "doors": [
            {"a": d.room_a, "b": d.room_b, "side": d.side.value, "offset": d.offset, "width": d.width}
            for d in layout.doors
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


# ---------- door geometry ----------


def door_segment_virtual(layout: VirtualLayout, door: Door, room_id: str | None = None) -> WallSegment:
    """The door segment on a room's wall at original (virtual) placement."""
    room_id = room_id if room_id is not None else door.room_a
    room = layout.rooms[room_id]
    side = door.side_for(room_id)
    return _door_segment_on(layout, door, room.virtual_rect, side, room_id)


def door_segment_current(layout: VirtualLayout, door: Door, room_id: str | None = None) -> WallSegment:
    """The door segment mapped proportionally onto a room's current wall."""
    room_id = room_id if room_id is not None else door.room_a
    room = layout.rooms[room_id]
    side = door.side_for(room_id)
    return _door_segment_on(layout, door, room.current_rect, side, room_id)


def _door_segment_on(layout: VirtualLayout, door: Door, rect: Rect, side: Side, room_id: str) -> WallSegment:
    # Compute the door's fractional span along room_a's virtual wall, then map
    # that span onto the requested rect's wall. For an undeformed rect this
    # reproduces the document geometry exactly.
    a_rect = layout.rooms[door.room_a].virtual_rect
    if door.side in (Side.EAST, Side.WEST):
        wall_lo, wall_len = a_rect.min_y, a_rect.depth
        c = a_rect.center.y + door.offset
    else:
        wall_lo, wall_len = a_rect.min_x, a_rect.width
        c = a_rect.center.x + door.offset
    rel_lo = (c - door.width / 2.0 - wall_lo) / wall_len
    rel_hi = (c + door.width / 2.0 - wall_lo) / wall_len

    coord = rect.side_coord(side)
    if side in (Side.EAST, Side.WEST):
        lo = rect.min_y + rel_lo * rect.depth
        hi = rect.min_y + rel_hi * rect.depth
        return WallSegment(Vec2(coord, lo), Vec2(coord, hi), side)
    lo = rect.min_x + rel_lo * rect.width
    hi = rect.min_x + rel_hi * rect.width
    return WallSegment(Vec2(lo, coord), Vec2(hi, coord), side)


# ---------- semantic validation ----------


def validate(layout: VirtualLayout, real: RealSpace | None = None) -> list[str]:
    """Semantic violations of a structurally well-formed layout.

    Checks room fit in the tracked space, door placement on genuinely shared
    walls, minimum door width, and door-graph connectivity. Returns a sorted
    list of human-readable violations; empty means valid.
    """
    real = real if real is not None else layout.real
    violations: list[str] = []

    for room in layout.rooms.values():
        if room.width > real.width + _EPS or room.depth > real.depth + _EPS:
            violations.append(
                f"room {room.id!r} ({room.width} x {room.depth}) does not fit in the "
                f"{real.width} x {real.depth} tracked space without rotation"
            )

    for door in layout.doors:
        a = layout.rooms[door.room_a]
        b = layout.rooms[door.room_b]
        label = f"door {door.id} ({door.room_a}->{door.room_b})"
        if door.width < MIN_DOOR_WIDTH - _EPS:
            violations.append(f"{label}: width {door.width} is below the {MIN_DOOR_WIDTH} m minimum")
        av, bv = a.virtual_rect, b.virtual_rect
        if door.side in (Side.EAST, Side.WEST):
            a_coord = av.side_coord(door.side)
            b_coord = bv.side_coord(_OPPOSITE[door.side])
            overlap_lo = max(av.min_y, bv.min_y)
            overlap_hi = min(av.max_y, bv.max_y)
        else:
            a_coord = av.side_coord(door.side)
            b_coord = bv.side_coord(_OPPOSITE[door.side])
            overlap_lo = max(av.min_x, bv.min_x)
            overlap_hi = min(av.max_x, bv.max_x)
        if abs(a_coord - b_coord) > _EPS:
            violations.append(f"{label}: rooms are not adjacent across the {door.side.value} wall")
            continue
        seg = door_segment_virtual(layout, door)
        lo = min(seg.a.x, seg.b.x) if door.side in (Side.NORTH, Side.SOUTH) else min(seg.a.y, seg.b.y)
        hi = max(seg.a.x, seg.b.x) if door.side in (Side.NORTH, Side.SOUTH) else max(seg.a.y, seg.b.y)
        if lo < overlap_lo - _EPS or hi > overlap_hi + _EPS:
            violations.append(f"{label}: door segment falls outside the shared wall span")

    if layout.rooms:
        seen = {next(iter(layout.rooms))}
        frontier = [next(iter(layout.rooms))]
        while frontier:
            here = frontier.pop()
            for nb in neighbors(layout, here):
                if nb not in seen:
                    seen.add(nb)
                    frontier.append(nb)
        missing = set(layout.rooms) - seen
        if missing:
            violations.append(
                "door graph is disconnected: unreachable rooms " + ", ".join(sorted(missing))
            )

    return sorted(violations)
