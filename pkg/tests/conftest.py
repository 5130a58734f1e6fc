import json
import os

import pytest

LAYOUT_DIR = os.path.join(os.path.dirname(__file__), "..", "layouts")


@pytest.fixture
def two_rooms_path() -> str:
    return os.path.join(LAYOUT_DIR, "two_rooms.json")


@pytest.fixture
def six_rooms_path() -> str:
    return os.path.join(LAYOUT_DIR, "six_rooms.json")


@pytest.fixture
def two_rooms_text(two_rooms_path) -> str:
    with open(two_rooms_path, encoding="utf-8") as fh:
        return fh.read()


def make_layout_doc(**overrides) -> dict:
    """A small valid two-room document, tweakable per test."""
    doc = {
        "real_space": {"width": 4.0, "depth": 4.0},
        "rooms": [
            {"id": "hall", "width": 3.0, "depth": 3.0, "x": 0.0, "y": 0.0, "color": "#4477aa"},
            {"id": "study", "width": 3.0, "depth": 3.0, "x": 3.0, "y": 0.0, "color": "#ee6677"},
        ],
        "doors": [
            {"a": "hall", "b": "study", "side": "east", "offset": 0.0, "width": 0.9},
        ],
    }
    doc.update(overrides)
    return doc


def doc_text(doc: dict) -> str:
    return json.dumps(doc)
