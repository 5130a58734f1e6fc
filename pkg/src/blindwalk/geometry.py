"""Planar primitives: axis-aligned rectangles, wall segments, and view-cone tests.

Everything here is pure and allocation-light; the simulation tick loop leans on
these functions heavily.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

# Default half-angle of the visual field used for wall-visibility gating.
DEFAULT_FOV_HALF_ANGLE = math.radians(55.0)

_TWO_PI = 2.0 * math.pi


class Side(str, Enum):
    NORTH = "north"
    EAST = "east"
    SOUTH = "south"
    WEST = "west"


# Fixed processing order for per-wall operations.
SIDES = (Side.NORTH, Side.EAST, Side.SOUTH, Side.WEST)


@dataclass(frozen=True)
class Vec2:
    x: float
    y: float

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def scaled(self, k: float) -> "Vec2":
        return Vec2(self.x * k, self.y * k)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle given by center and half-extents (meters)."""

    center: Vec2
    half_w: float
    half_d: float

    def __post_init__(self) -> None:
        if self.half_w <= 0.0 or self.half_d <= 0.0:
            raise ValueError(f"rect half-extents must be positive, got ({self.half_w}, {self.half_d})")

    @staticmethod
    def from_bounds(min_x: float, min_y: float, max_x: float, max_y: float) -> "Rect":
        return Rect(Vec2((min_x + max_x) / 2.0, (min_y + max_y) / 2.0), (max_x - min_x) / 2.0, (max_y - min_y) / 2.0)

    @property
    def min_x(self) -> float:
        return self.center.x - self.half_w

    @property
    def max_x(self) -> float:
        return self.center.x + self.half_w

    @property
    def min_y(self) -> float:
        return self.center.y - self.half_d

    @property
    def max_y(self) -> float:
        return self.center.y + self.half_d

    @property
    def width(self) -> float:
        return 2.0 * self.half_w

    @property
    def depth(self) -> float:
        return 2.0 * self.half_d

    def side_coord(self, side: Side) -> float:
        """World coordinate of one wall plane (y for north/south, x for east/west)."""
        if side is Side.NORTH:
            return self.max_y
        if side is Side.EAST:
            return self.max_x
        if side is Side.SOUTH:
            return self.min_y
        return self.min_x


@dataclass(frozen=True)
class WallSegment:
    a: Vec2
    b: Vec2
    side: Side


@dataclass(frozen=True)
class UserPose:
    position: Vec2
    heading: float  # radians, 0 along +x


def normalize_angle(theta: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    theta = math.fmod(theta, _TWO_PI)
    if theta <= -math.pi:
        theta += _TWO_PI
    elif theta > math.pi:
        theta -= _TWO_PI
    return theta


def contains(rect: Rect, p: Vec2, eps: float = 0.0) -> bool:
    """True iff p lies in rect; the boundary counts as inside."""
    return (
        rect.min_x - eps <= p.x <= rect.max_x + eps
        and rect.min_y - eps <= p.y <= rect.max_y + eps
    )


def contains_rect(outer: Rect, inner: Rect, eps: float = 0.0) -> bool:
    return (
        inner.min_x >= outer.min_x - eps
        and inner.max_x <= outer.max_x + eps
        and inner.min_y >= outer.min_y - eps
        and inner.max_y <= outer.max_y + eps
    )


def wall_segments(rect: Rect) -> tuple[WallSegment, WallSegment, WallSegment, WallSegment]:
    """The four walls in fixed order (N, E, S, W), each wound counterclockwise."""
    lo_x, hi_x = rect.min_x, rect.max_x
    lo_y, hi_y = rect.min_y, rect.max_y
    return (
        WallSegment(Vec2(hi_x, hi_y), Vec2(lo_x, hi_y), Side.NORTH),
        WallSegment(Vec2(hi_x, lo_y), Vec2(hi_x, hi_y), Side.EAST),
        WallSegment(Vec2(lo_x, lo_y), Vec2(hi_x, lo_y), Side.SOUTH),
        WallSegment(Vec2(lo_x, hi_y), Vec2(lo_x, lo_y), Side.WEST),
    )


def wall_segment(rect: Rect, side: Side) -> WallSegment:
    lo_x, hi_x = rect.min_x, rect.max_x
    lo_y, hi_y = rect.min_y, rect.max_y
    if side is Side.NORTH:
        return WallSegment(Vec2(hi_x, hi_y), Vec2(lo_x, hi_y), side)
    if side is Side.EAST:
        return WallSegment(Vec2(hi_x, lo_y), Vec2(hi_x, hi_y), side)
    if side is Side.SOUTH:
        return WallSegment(Vec2(lo_x, lo_y), Vec2(hi_x, lo_y), side)
    return WallSegment(Vec2(lo_x, hi_y), Vec2(lo_x, lo_y), side)


def shortest_distance(p: Vec2, seg: WallSegment) -> float:
    """Euclidean distance from p to the closest point of seg."""
    ax, ay = seg.a.x, seg.a.y
    dx, dy = seg.b.x - ax, seg.b.y - ay
    len_sq = dx * dx + dy * dy
    if len_sq == 0.0:
        return math.hypot(p.x - ax, p.y - ay)
    t = ((p.x - ax) * dx + (p.y - ay) * dy) / len_sq
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    return math.hypot(p.x - (ax + t * dx), p.y - (ay + t * dy))


def fully_outside_fov(pose: UserPose, seg: WallSegment, fov_half_angle: float) -> bool:
    """True iff every point of seg lies strictly outside the view cone.

    The cone is the closed angular wedge [heading - fov_half_angle,
    heading + fov_half_angle] around pose.position; a point exactly on the
    wedge boundary counts as visible. A segment passing through the position
    is never outside. Occlusion is deliberately not modeled, so this is a
    conservative test.
    """
    px, py = pose.position.x, pose.position.y
    if shortest_distance(pose.position, seg) < 1e-12:
        return False
    alpha = math.atan2(seg.a.y - py, seg.a.x - px)
    beta = math.atan2(seg.b.y - py, seg.b.x - px)
    # Directions to segment points sweep monotonically between the endpoint
    # angles; the swept arc is the one not exceeding pi.
    delta = normalize_angle(beta - alpha)
    if delta < 0.0:
        alpha, beta = beta, alpha
        delta = -delta
    start = normalize_angle(alpha - pose.heading)  # arc start, heading-relative
    end = start + delta  # may exceed pi; compare against wedge and its 2pi image
    h = fov_half_angle
    hits_wedge = (start <= h and end >= -h) or (end >= _TWO_PI - h)
    return not hits_wedge


def nearest_parallel_side(rect: Rect, seg: WallSegment) -> tuple[Side, float]:
    """Of rect's two sides parallel to seg, the nearer one and its distance.

    Ties resolve to the side with the smaller coordinate (west/south).
    """
    vertical = abs(seg.a.x - seg.b.x) < 1e-12
    horizontal = abs(seg.a.y - seg.b.y) < 1e-12
    if vertical and not (horizontal and seg.a == seg.b):
        d_west = abs(seg.a.x - rect.min_x)
        d_east = abs(seg.a.x - rect.max_x)
        return (Side.WEST, d_west) if d_west <= d_east else (Side.EAST, d_east)
    if horizontal:
        d_south = abs(seg.a.y - rect.min_y)
        d_north = abs(seg.a.y - rect.max_y)
        return (Side.SOUTH, d_south) if d_south <= d_north else (Side.NORTH, d_north)
    raise ValueError("segment is not axis-aligned")
