"""Scripted users: deterministic policies that drive the simulation.

Policies read an Observation and emit an Action; they never mutate engine
state. All randomness comes from the generator handed in at construction, so
a (config, seed) pair fully determines behavior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Protocol

from .geometry import Rect, Side, UserPose, Vec2, normalize_angle
from .layout import DoorState
from .redirection import Phase

WALK_SPEED = 1.4  # m/s, brisk indoor walking
TURN_SPEED = math.pi  # rad/s
TICK_DT = 1.0 / 30.0

COIN_COLLECT_RADIUS = 0.3
COIN_MARGIN = 0.3
COINS_PER_ROOM = 5

_OUTWARD = {
    Side.NORTH: Vec2(0.0, 1.0),
    Side.EAST: Vec2(1.0, 0.0),
    Side.SOUTH: Vec2(0.0, -1.0),
    Side.WEST: Vec2(-1.0, 0.0),
}


@dataclass(frozen=True)
class DoorView:
    id: str
    state: DoorState
    side: Side  # side of the current room the door sits on
    midpoint: Vec2  # on the current room's wall, tracked coordinates


@dataclass(frozen=True)
class Observation:
    tick: int
    pose: UserPose
    room_id: str
    room_rect: Rect
    phase: Phase
    coins: tuple[Vec2, ...]  # tracked positions
    doors: tuple[DoorView, ...]
    dt: float
    speed_cap: float
    turn_cap: float


@dataclass(frozen=True)
class Action:
    move: Vec2 = Vec2(0.0, 0.0)  # world-frame displacement for this tick
    turn: float = 0.0  # heading delta, radians
    door_command: tuple[str, DoorState] | None = None


class Policy(Protocol):
    def step(self, obs: Observation) -> Action: ...


def _turn_toward(obs: Observation, bearing: float) -> float:
    delta = normalize_angle(bearing - obs.pose.heading)
    cap = obs.turn_cap * obs.dt
    return min(max(delta, -cap), cap)


def _walk_toward(obs: Observation, target: Vec2) -> Action:
    to = target - obs.pose.position
    dist = to.norm()
    if dist < 1e-9:
        return Action()
    step = min(obs.speed_cap * obs.dt, dist)
    move = to.scaled(step / dist)
    return Action(move=move, turn=_turn_toward(obs, math.atan2(to.y, to.x)))


class _RotationScript:
    """One full 2*pi sweep, then face each wall in turn with a short dwell."""

    FACINGS = (math.pi / 2.0, 0.0, -math.pi / 2.0, math.pi)  # N, E, S, W bearings
    DWELL_TICKS = 10

    def __init__(self) -> None:
        self.reset()

    def reset(self) -> None:
        self._spin_left = 2.0 * math.pi
        self._facing = 0
        self._dwell = 0

    def turn(self, obs: Observation) -> float:
        cap = obs.turn_cap * obs.dt
        if self._spin_left > 0.0:
            t = min(cap, self._spin_left)
            self._spin_left -= t
            return t
        if self._dwell > 0:
            self._dwell -= 1
            if self._dwell == 0:
                self._facing += 1
                if self._facing >= len(self.FACINGS):
                    self.reset()
            return 0.0
        delta = normalize_angle(self.FACINGS[self._facing] - obs.pose.heading)
        if abs(delta) < 1e-6:
            self._dwell = self.DWELL_TICKS
            return 0.0
        return min(max(delta, -cap), cap)


class IdlePolicy:
    """Stands still. Useful as a control and for protocol tests."""

    def step(self, obs: Observation) -> Action:
        return Action()


class LookAroundPolicy:
    """Drives a restore to completion: drift to the room's current center,
    then sweep the view around so every wall gets out-of-view epochs.

    Rotating from a fixed spot cannot finish a restore when the user stands
    between a wall and its goal (a toward-move can approach but never pass the
    user), so the policy re-centers between sweeps; the room's center
    converges to the tracked-space center as walls come home.
    """

    CENTER_TOLERANCE = 0.05

    def __init__(self) -> None:
        self._script = _RotationScript()
        self._room: str | None = None

    def step(self, obs: Observation) -> Action:
        if obs.room_id != self._room:
            self._room = obs.room_id
            self._script.reset()
        to_center = obs.room_rect.center - obs.pose.position
        if to_center.norm() > self.CENTER_TOLERANCE:
            return _walk_toward(obs, obs.room_rect.center)
        return Action(turn=self._script.turn(obs))


class CoinCollectorPolicy:
    """Collects every coin in the room, waits out the restore, then leaves
    through a seeded-random door."""

    DOOR_CROSS_DEPTH = 0.25

    def __init__(self, rng) -> None:
        self._rng = rng
        self._look = LookAroundPolicy()
        self._room: str | None = None
        self._exit_door: str | None = None

    def step(self, obs: Observation) -> Action:
        if obs.room_id != self._room:
            self._room = obs.room_id
            self._exit_door = None
        if obs.coins:
            target = min(obs.coins, key=lambda c: ((c - obs.pose.position).norm(), c.x, c.y))
            return _walk_toward(obs, target)
        if obs.phase is Phase.RESTORING:
            return self._look.step(obs)
        if not obs.doors:
            return Action()
        if self._exit_door is None:
            self._exit_door = self._rng.choice(sorted(d.id for d in obs.doors))
        door = next(d for d in obs.doors if d.id == self._exit_door)
        waypoint = door.midpoint + _OUTWARD[door.side].scaled(self.DOOR_CROSS_DEPTH)
        action = _walk_toward(obs, waypoint)
        if door.state is DoorState.CLOSED:
            action = Action(move=action.move, turn=action.turn, door_command=(door.id, DoorState.OPEN))
        return action


@dataclass
class CoinTask:
    """Coin state for one run. Coins live at fixed fractions of their room's
    rectangle, so tracked positions stretch with the walls and pull the user
    toward the restored interior."""

    coins_per_room: int = COINS_PER_ROOM
    collect_radius: float = COIN_COLLECT_RADIUS
    margin: float = COIN_MARGIN
    rel_coins: list[tuple[float, float]] = field(default_factory=list)
    collected: int = 0

    def spawn(self, room_width: float, room_depth: float, rng) -> int:
        """Roll fresh coin positions for a just-entered room; returns the count
        actually placed (0 with a warning-worthy tiny room)."""
        self.rel_coins.clear()
        inner_w = room_width - 2.0 * self.margin
        inner_d = room_depth - 2.0 * self.margin
        if inner_w <= 0.0 or inner_d <= 0.0:
            return 0
        for _ in range(self.coins_per_room):
            u = (self.margin + rng.random() * inner_w) / room_width
            v = (self.margin + rng.random() * inner_d) / room_depth
            self.rel_coins.append((u, v))
        return len(self.rel_coins)

    def tracked_positions(self, rect: Rect) -> tuple[Vec2, ...]:
        return tuple(
            Vec2(rect.min_x + u * rect.width, rect.min_y + v * rect.depth)
            for u, v in self.rel_coins
        )

    def collect_at(self, pose_pos: Vec2, rect: Rect) -> list[Vec2]:
        """Remove and return coins within reach of the user."""
        got: list[Vec2] = []
        keep: list[tuple[float, float]] = []
        for u, v in self.rel_coins:
            p = Vec2(rect.min_x + u * rect.width, rect.min_y + v * rect.depth)
            if (p - pose_pos).norm() <= self.collect_radius:
                got.append(p)
                self.collected += 1
            else:
                keep.append((u, v))
        self.rel_coins = keep
        return got


def make_policy(name: str, params: dict, rng) -> Policy:
    if name == "coin_collector":
        return CoinCollectorPolicy(rng)
    if name == "look_around":
        return LookAroundPolicy()
    if name == "idle":
        return IdlePolicy()
    raise ValueError(f"unknown policy {name!r}")
