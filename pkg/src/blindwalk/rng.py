"""Deterministic named RNG streams derived from a single run seed."""

from __future__ import annotations

import random


def stream(seed: int, name: str) -> random.Random:
    """A reproducible generator for one subsystem.

    Seeding with a string routes through SHA-512 inside random.Random, which is
    stable across processes and platforms (never Python's built-in hash()).
    """
    return random.Random(f"{seed}:{name}")
