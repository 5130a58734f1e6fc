"""Layout document parsing, door geometry, and semantic validation."""

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from blindwalk.geometry import Rect, Side, Vec2
from blindwalk.layout import (
    MIN_DOOR_WIDTH,
    DoorState,
    LayoutError,
    RealSpace,
    door_segment_current,
    door_segment_virtual,
    load_layout,
    neighbors,
    parse_layout,
    serialize_layout,
    validate,
)

from conftest import doc_text, make_layout_doc


# ---------- parsing ----------


def test_parse_valid_document(two_rooms_text):
    layout = parse_layout(two_rooms_text)
    assert set(layout.rooms) == {"hall", "study"}
    assert layout.real.width == 4.0 and layout.real.depth == 4.0
    assert len(layout.doors) == 1


def test_room_coordinates_are_centers():
    layout = parse_layout(doc_text(make_layout_doc()))
    hall = layout.rooms["hall"]
    r = hall.virtual_rect
    assert (r.min_x, r.min_y, r.max_x, r.max_y) == (-1.5, -1.5, 1.5, 1.5)
    assert hall.current_rect == hall.virtual_rect


def test_door_ids_follow_document_order():
    doc = make_layout_doc()
    doc["doors"].append({"a": "study", "b": "hall", "side": "west", "offset": 0.5, "width": 0.8})
    layout = parse_layout(doc_text(doc))
    assert [d.id for d in layout.doors] == ["d0", "d1"]


def test_doors_start_closed():
    layout = parse_layout(doc_text(make_layout_doc()))
    assert all(d.state is DoorState.CLOSED for d in layout.doors)


def test_invalid_json_reports_position():
    with pytest.raises(LayoutError, match=r"line 2, column"):
        parse_layout('{"real_space": {},\n  "rooms": [}')


@pytest.mark.parametrize(
    "mutate, path",
    [
        (lambda d: d.update(extra=1), r"\$: unknown field 'extra'"),
        (lambda d: d["real_space"].update(height=2), r"\$\.real_space: unknown field 'height'"),
        (lambda d: d["rooms"][1].update(area=9), r"\$\.rooms\[1\]: unknown field 'area'"),
        (lambda d: d["doors"][0].update(locked=True), r"\$\.doors\[0\]: unknown field 'locked'"),
    ],
)
def test_unknown_fields_rejected_with_path(mutate, path):
    doc = make_layout_doc()
    mutate(doc)
    with pytest.raises(LayoutError, match=path):
        parse_layout(doc_text(doc))


@pytest.mark.parametrize(
    "mutate, path",
    [
        (lambda d: d.pop("real_space"), r"\$: missing field 'real_space'"),
        (lambda d: d.pop("rooms"), r"\$: missing field 'rooms'"),
        (lambda d: d["rooms"][0].pop("id"), r"\$\.rooms\[0\]: missing field 'id'"),
        (lambda d: d["rooms"][0].pop("width"), r"\$\.rooms\[0\]: missing field 'width'"),
        (lambda d: d["doors"][0].pop("offset"), r"\$\.doors\[0\]: missing field 'offset'"),
    ],
)
def test_missing_fields_rejected_with_path(mutate, path):
    doc = make_layout_doc()
    mutate(doc)
    with pytest.raises(LayoutError, match=path):
        parse_layout(doc_text(doc))


def test_duplicate_room_id_rejected():
    doc = make_layout_doc()
    doc["rooms"][1]["id"] = "hall"
    with pytest.raises(LayoutError, match="duplicate room id 'hall'"):
        parse_layout(doc_text(doc))


def test_door_referencing_missing_room_rejected():
    doc = make_layout_doc()
    doc["doors"][0]["b"] = "cellar"
    with pytest.raises(LayoutError, match="missing room 'cellar'"):
        parse_layout(doc_text(doc))


def test_door_joining_room_to_itself_rejected():
    doc = make_layout_doc()
    doc["doors"][0]["b"] = "hall"
    with pytest.raises(LayoutError, match="joins room 'hall' to itself"):
        parse_layout(doc_text(doc))


def test_unknown_door_side_rejected():
    doc = make_layout_doc()
    doc["doors"][0]["side"] = "up"
    with pytest.raises(LayoutError, match="unknown side 'up'"):
        parse_layout(doc_text(doc))


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d["rooms"][0].update(width=0),
        lambda d: d["rooms"][0].update(depth=-2.0),
        lambda d: d["real_space"].update(width=0.0),
        lambda d: d["doors"][0].update(width=-0.9),
    ],
)
def test_non_positive_dimensions_rejected(mutate):
    doc = make_layout_doc()
    mutate(doc)
    with pytest.raises(LayoutError, match="must be positive"):
        parse_layout(doc_text(doc))


def test_booleans_are_not_numbers():
    # JSON true satisfies isinstance(int) in Python; it must still be rejected.
    doc = make_layout_doc()
    doc["rooms"][0]["width"] = True
    with pytest.raises(LayoutError, match="expected a number"):
        parse_layout(doc_text(doc))


def test_empty_or_non_string_id_rejected():
    doc = make_layout_doc()
    doc["rooms"][0]["id"] = ""
    with pytest.raises(LayoutError, match="non-empty string"):
        parse_layout(doc_text(doc))


def test_at_least_one_room_required():
    doc = make_layout_doc(rooms=[], doors=[])
    with pytest.raises(LayoutError, match="at least one room"):
        parse_layout(doc_text(doc))


def test_single_room_without_doors_is_valid():
    doc = make_layout_doc(doors=[])
    doc["rooms"] = doc["rooms"][:1]
    layout = parse_layout(doc_text(doc))
    assert validate(layout) == []


def test_load_layout_reads_file(tmp_path):
    p = tmp_path / "lay.json"
    p.write_text(doc_text(make_layout_doc()), encoding="utf-8")
    layout = load_layout(str(p))
    assert set(layout.rooms) == {"hall", "study"}


# ---------- serialization ----------


def test_serialize_round_trip(two_rooms_text):
    layout = parse_layout(two_rooms_text)
    text = serialize_layout(layout)
    again = parse_layout(text)
    assert again.real == layout.real
    assert {r.id: r.virtual_rect for r in again.rooms.values()} == {
        r.id: r.virtual_rect for r in layout.rooms.values()
    }
    assert [(d.id, d.room_a, d.room_b, d.side, d.offset, d.width) for d in again.doors] == [
        (d.id, d.room_a, d.room_b, d.side, d.offset, d.width) for d in layout.doors
    ]


def test_serialize_is_canonical():
    text = serialize_layout(parse_layout(doc_text(make_layout_doc())))
    assert text.endswith("\n")
    assert serialize_layout(parse_layout(text)) == text


@given(
    x=st.floats(-10, 10).map(lambda v: round(v, 3)),
    y=st.floats(-10, 10).map(lambda v: round(v, 3)),
    w=st.floats(0.5, 8).map(lambda v: round(v, 3)),
    d=st.floats(0.5, 8).map(lambda v: round(v, 3)),
    offset=st.floats(-2, 2).map(lambda v: round(v, 3)),
)
def test_serialize_round_trip_preserves_numbers(x, y, w, d, offset):
    doc = make_layout_doc()
    doc["rooms"][1].update(x=x, y=y, width=w, depth=d)
    doc["doors"][0]["offset"] = offset
    layout = parse_layout(doc_text(doc))
    again = parse_layout(serialize_layout(layout))
    room = again.rooms["study"]
    assert (room.x, room.y, room.width, room.depth) == (x, y, w, d)
    assert again.doors[0].offset == offset


# ---------- door geometry ----------


def test_door_segment_virtual_exact(two_rooms_text):
    layout = parse_layout(two_rooms_text)
    door = layout.doors[0]
    seg = door_segment_virtual(layout, door)
    assert seg.side is Side.EAST
    assert (seg.a.x, seg.b.x) == (1.5, 1.5)
    assert min(seg.a.y, seg.b.y) == pytest.approx(-0.45, abs=1e-12)
    assert max(seg.a.y, seg.b.y) == pytest.approx(0.45, abs=1e-12)
    # Same opening seen from the study's west wall.
    other = door_segment_virtual(layout, door, "study")
    assert other.side is Side.WEST
    assert (other.a.x, other.b.x) == (1.5, 1.5)
    assert min(other.a.y, other.b.y) == pytest.approx(-0.45, abs=1e-12)
    assert max(other.a.y, other.b.y) == pytest.approx(0.45, abs=1e-12)


def test_door_segment_virtual_with_offset():
    doc = make_layout_doc()
    doc["doors"][0]["offset"] = 0.6
    layout = parse_layout(doc_text(doc))
    seg = door_segment_virtual(layout, layout.doors[0])
    assert min(seg.a.y, seg.b.y) == pytest.approx(0.15)
    assert max(seg.a.y, seg.b.y) == pytest.approx(1.05)


def test_door_segment_current_remaps_proportionally(two_rooms_text):
    layout = parse_layout(two_rooms_text)
    door = layout.doors[0]
    # Shrink the hall to a 2 x 2 rect at a new spot; the door covers the
    # same fractional span of the east wall, 0.35 to 0.65.
    layout.rooms["hall"].current_rect = Rect(Vec2(0.5, 1.0), 1.0, 1.0)
    seg = door_segment_current(layout, door, "hall")
    assert seg.side is Side.EAST
    assert seg.a.x == pytest.approx(1.5)
    assert min(seg.a.y, seg.b.y) == pytest.approx(0.7)
    assert max(seg.a.y, seg.b.y) == pytest.approx(1.3)


def test_door_segment_current_matches_virtual_before_any_motion(two_rooms_text):
    layout = parse_layout(two_rooms_text)
    door = layout.doors[0]
    assert door_segment_current(layout, door) == door_segment_virtual(layout, door)


def test_door_side_for_and_other(two_rooms_text):
    layout = parse_layout(two_rooms_text)
    door = layout.doors[0]
    assert door.side_for("hall") is Side.EAST
    assert door.side_for("study") is Side.WEST
    assert door.other("hall") == "study"
    assert door.other("study") == "hall"
    with pytest.raises(KeyError):
        door.side_for("cellar")


def test_layout_lookups(two_rooms_text):
    layout = parse_layout(two_rooms_text)
    assert neighbors(layout, "hall") == {"study"}
    assert [d.id for d in layout.doors_of("study")] == ["d0"]
    assert layout.door_by_id("d0").room_a == "hall"
    with pytest.raises(KeyError):
        layout.door_by_id("d9")
    with pytest.raises(KeyError):
        neighbors(layout, "cellar")


# ---------- validation ----------


def test_validate_accepts_bundled_layouts(two_rooms_path, six_rooms_path):
    for path in (two_rooms_path, six_rooms_path):
        assert validate(load_layout(path)) == []


def test_validate_flags_narrow_door():
    doc = make_layout_doc()
    doc["doors"][0]["width"] = 0.5
    layout = parse_layout(doc_text(doc))
    violations = validate(layout)
    assert len(violations) == 1
    assert f"below the {MIN_DOOR_WIDTH} m minimum" in violations[0]
    assert "d0" in violations[0]


def test_validate_flags_non_adjacent_rooms():
    doc = make_layout_doc()
    doc["rooms"][1]["x"] = 3.5  # gap between hall's east wall and study's west wall
    layout = parse_layout(doc_text(doc))
    violations = validate(layout)
    assert violations == ["door d0 (hall->study): rooms are not adjacent across the east wall"]


def test_validate_flags_door_outside_shared_span():
    doc = make_layout_doc()
    doc["rooms"][1]["y"] = 2.0  # walls overlap only for y in [0.5, 1.5]
    layout = parse_layout(doc_text(doc))
    violations = validate(layout)
    assert violations == ["door d0 (hall->study): door segment falls outside the shared wall span"]


def test_validate_flags_oversized_room():
    doc = make_layout_doc()
    doc["rooms"][0].update(width=5.0)
    doc["rooms"][1]["x"] = 4.0  # keep the rooms adjacent
    layout = parse_layout(doc_text(doc))
    violations = validate(layout)
    assert any("does not fit in the 4.0 x 4.0 tracked space" in v for v in violations)


def test_validate_with_real_space_override(two_rooms_text):
    layout = parse_layout(two_rooms_text)
    violations = validate(layout, RealSpace(2.5, 4.0))
    assert len(violations) == 2  # both 3 x 3 rooms exceed a 2.5 m width
    assert all("does not fit" in v for v in violations)


def test_validate_flags_disconnected_rooms():
    doc = make_layout_doc()
    doc["rooms"].append({"id": "attic", "width": 3.0, "depth": 3.0, "x": 0.0, "y": 3.0, "color": "#ccbb44"})
    layout = parse_layout(doc_text(doc))
    violations = validate(layout)
    assert violations == ["door graph is disconnected: unreachable rooms attic"]


def test_validate_reports_sorted_violations():
    doc = make_layout_doc()
    doc["rooms"].append({"id": "attic", "width": 5.0, "depth": 3.0, "x": 0.0, "y": 3.0, "color": "#ccbb44"})
    doc["doors"][0]["width"] = 0.4
    layout = parse_layout(doc_text(doc))
    violations = validate(layout)
    assert len(violations) == 3  # narrow door, oversized room, disconnected attic
    assert violations == sorted(violations)


def test_validate_does_not_mutate_layout(two_rooms_text):
    layout = parse_layout(two_rooms_text)
    before = json.loads(serialize_layout(layout))
    validate(layout)
    assert json.loads(serialize_layout(layout)) == before
