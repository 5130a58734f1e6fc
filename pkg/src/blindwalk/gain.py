"""Wall-movement gains: detection-threshold model and psychometric tooling.

The threshold table stores, per user-wall distance, the gain band inside which
a wall move made outside the field of view goes unnoticed (lower 25% threshold,
point of subjective equality, upper 75% threshold). Distances between rows are
linearly interpolated; outside the measured range the nearest row applies.

The psychometric side fits the two-parameter logistic

    f(x) = 1 / (1 + exp(a*x + b)),        a < 0,

to two-alternative forced-choice responses, where f(x) is the probability of
answering "larger" (the room felt expanded) at gain x. The fit is a maximum
likelihood estimate computed with damped Newton iterations.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, TextIO

import numpy as np

from .rng import stream

LN3 = math.log(3.0)


class Direction(Enum):
    TOWARD = "toward"
    AWAY = "away"


class DistanceClass(str, Enum):
    SHORT = "Short"
    MIDDLE = "Middle"
    LONG = "Long"


# Viewing distance represented by each class, in meters.
CLASS_DISTANCE = {
    DistanceClass.SHORT: 1.0,
    DistanceClass.MIDDLE: 2.0,
    DistanceClass.LONG: 3.0,
}

# Gain levels probed per class: 0.1 steps for Long/Middle, 0.05 for Short.
CLASS_GAINS = {
    DistanceClass.LONG: (0.8, 0.9, 1.0, 1.1, 1.2),
    DistanceClass.MIDDLE: (0.8, 0.9, 1.0, 1.1, 1.2),
    DistanceClass.SHORT: (0.9, 0.95, 1.0, 1.05, 1.1),
}

SESSION_REPEATS = 3


@dataclass(frozen=True)
class ThresholdRow:
    distance: float
    lower: float
    pse: float
    upper: float


@dataclass(frozen=True)
class GainThresholds:
    rows: tuple[ThresholdRow, ...]

    def __post_init__(self) -> None:
        if not self.rows:
            raise ValueError("threshold table needs at least one row")
        last = 0.0
        for row in self.rows:
            if row.distance <= last:
                raise ValueError("threshold rows must be sorted by strictly increasing distance")
            if not (0.0 < row.lower < 1.0 < row.upper):
                raise ValueError(f"threshold row at {row.distance} m must satisfy 0 < lower < 1 < upper")
            if not (row.lower <= row.pse <= row.upper):
                raise ValueError(f"threshold row at {row.distance} m has its midpoint outside [lower, upper]")
            last = row.distance


DEFAULT_THRESHOLDS = GainThresholds(
    rows=(
        ThresholdRow(1.0, 0.899, 1.020, 1.145),
        ThresholdRow(2.0, 0.868, 1.030, 1.200),
        ThresholdRow(3.0, 0.737, 0.974, 1.211),
    )
)


def wall_movement_gain(t_before: float, t_after: float) -> float:
    """Gain of one wall move: user-wall distance after over distance before."""
    if t_before <= 0.0:
        raise ValueError("gain undefined: wall distance before the move must be positive")
    if t_after < 0.0:
        raise ValueError("wall distance after the move cannot be negative")
    return t_after / t_before


def thresholds_at(thresholds: GainThresholds, distance: float) -> tuple[float, float, float]:
    """(lower, pse, upper) at a viewing distance; interpolated, clamped outside."""
    if distance <= 0.0:
        raise ValueError("distance must be positive")
    rows = thresholds.rows
    if distance <= rows[0].distance:
        r = rows[0]
        return (r.lower, r.pse, r.upper)
    if distance >= rows[-1].distance:
        r = rows[-1]
        return (r.lower, r.pse, r.upper)
    for lo, hi in zip(rows, rows[1:]):
        if lo.distance <= distance <= hi.distance:
            t = (distance - lo.distance) / (hi.distance - lo.distance)
            return (
                lo.lower + t * (hi.lower - lo.lower),
                lo.pse + t * (hi.pse - lo.pse),
                lo.upper + t * (hi.upper - lo.upper),
            )
    raise AssertionError("unreachable: rows are sorted")


def max_imperceptible_step(thresholds: GainThresholds, distance: float, direction: Direction) -> float:
    """Largest single out-of-view wall displacement that stays inside the gain band.

    Moving away multiplies the distance by at most upper, moving toward by at
    least lower, so the per-move displacement budget is distance * |gain - 1|
    at the band edge for that direction.
    """
    lower, _, upper = thresholds_at(thresholds, distance)
    if direction is Direction.AWAY:
        return distance * (upper - 1.0)
    return distance * (1.0 - lower)


# ---------- psychometric fitting ----------


@dataclass(frozen=True)
class ResponseSample:
    distance_class: DistanceClass
    gain: float
    answered_larger: bool


@dataclass(frozen=True)
class PsychometricFit:
    a: float
    b: float
    log_likelihood: float
    warning: bool = False


def logistic(fit_a: float, fit_b: float, x: float) -> float:
    """f(x) = 1/(1 + exp(a*x + b)), numerically stable."""
    z = fit_a * x + fit_b
    if z >= 0.0:
        e = math.exp(-z)
        return e / (1.0 + e)
    return 1.0 / (1.0 + math.exp(z))

# Box the optimizer: |a| <= 1e3 guards against perfect-separation blowup and
# the a -> 0- edge marks data whose response rate decreases with gain.
_A_LO, _A_HI = -1e3, -1e-6
_B_LO, _B_HI = -1e4, 1e4


def _aggregate(samples: Sequence[ResponseSample]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    counts: dict[float, list[int]] = {}
    for s in samples:
        cell = counts.setdefault(float(s.gain), [0, 0])
        cell[0] += 1
        if s.answered_larger:
            cell[1] += 1
    gains = sorted(counts)
    x = np.array(gains, dtype=float)
    n = np.array([counts[g][0] for g in gains], dtype=float)
    k = np.array([counts[g][1] for g in gains], dtype=float)
    return x, n, k


def _nll(a: float, b: float, x: np.ndarray, n: np.ndarray, k: np.ndarray) -> float:
    z = a * x + b
    log_p = -np.logaddexp(0.0, z)  # log f
    log_q = z + log_p  # log (1 - f)
    return float(-(k * log_p + (n - k) * log_q).sum())


def fit_psychometric(samples: Sequence[ResponseSample]) -> PsychometricFit:
    """Maximum-likelihood logistic fit to 2AFC responses.

    Responses are aggregated per gain first, so the fit is invariant to sample
    order. Damped Newton iterations start from a0 = -10, b0 = 10 * mean(gain)
    and stop when the gradient infinity-norm drops below 1e-10 (200 iterations
    at most). Perfectly separated data (every gain cell unanimous) converges
    to an arbitrarily steep curve and is flagged with warning=True instead of
    an error; data whose "larger" rate decreases with gain is rejected.
    """
    if not samples:
        raise ValueError("no samples")
    x, n, k = _aggregate(samples)
    if len(x) < 2:
        raise ValueError("need responses at two or more distinct gain values")
    one_kind = bool((k == 0.0).all() or (k == n).all())
    # Every cell unanimous: the likelihood has no interior optimum and the
    # fitted curve is a step; report it rather than trusting box edges.
    saturated = bool(((k == 0.0) | (k == n)).all())

    # Initial guess from the aggregated cells so the fit cannot depend on
    # sample order through float summation.
    mean_gain = float((n * x).sum() / n.sum())
    a, b = -10.0, 10.0 * mean_gain
    val = _nll(a, b, x, n, k)
    for _ in range(200):
        z = a * x + b
        p = np.where(z >= 0.0, np.exp(-np.clip(z, 0.0, None)) / (1.0 + np.exp(-np.clip(z, 0.0, None))),
                     1.0 / (1.0 + np.exp(np.clip(z, None, 0.0))))
        r = k - n * p
        g_a = float((r * x).sum())
        g_b = float(r.sum())
        if max(abs(g_a), abs(g_b)) < 1e-10:
            break
        w = n * p * (1.0 - p)
        h_aa = float((w * x * x).sum())
        h_ab = float((w * x).sum())
        h_bb = float(w.sum())
        det = h_aa * h_bb - h_ab * h_ab
        if det < 1e-12:  # saturated or ill-conditioned; ridge keeps the step finite
            h_aa += 1e-9
            h_bb += 1e-9
            det = h_aa * h_bb - h_ab * h_ab
        da = -(h_bb * g_a - h_ab * g_b) / det
        db = -(h_aa * g_b - h_ab * g_a) / det
        step = 1.0
        improved = False
        while step > 1e-10:
            cand_a = min(max(a + step * da, _A_LO), _A_HI)
            cand_b = min(max(b + step * db, _B_LO), _B_HI)
            cand_val = _nll(cand_a, cand_b, x, n, k)
            if cand_val <= val + 1e-15:
                a, b, val = cand_a, cand_b, cand_val
                improved = True
                break
            step *= 0.5
        if not improved:
            break
    if a >= _A_HI - 1e-12 and not one_kind:
        raise ValueError("inconsistent data: fitted response rate does not increase with gain")
    warning = saturated or a >= _A_HI - 1e-12 or a <= _A_LO + 1e-9 or abs(b) >= _B_HI - 1e-6
    return PsychometricFit(a=a, b=b, log_likelihood=-val, warning=warning)


def pse(fit: PsychometricFit) -> float:
    """Gain at which f = 0.5 (the point of subjective equality)."""
    return -fit.b / fit.a


def detection_range(fit: PsychometricFit) -> tuple[float, float]:
    """(x25, x75): gains where f = 0.25 and f = 0.75, smaller first."""
    lo = (LN3 - fit.b) / fit.a
    hi = (-LN3 - fit.b) / fit.a
    return (lo, hi) if lo <= hi else (hi, lo)


# ---------- session planning and response files ----------


@dataclass(frozen=True)
class PlannedTrial:
    distance_class: DistanceClass
    gain: float
    repeat_index: int


def plan_threshold_session(seed: int) -> list[PlannedTrial]:
    """The 45-trial threshold session: 3 distance classes x 5 gains x 3 repeats,
    in a seed-deterministic shuffled order."""
    trials = [
        PlannedTrial(cls, gain, rep)
        for cls in (DistanceClass.SHORT, DistanceClass.MIDDLE, DistanceClass.LONG)
        for gain in CLASS_GAINS[cls]
        for rep in range(SESSION_REPEATS)
    ]
    stream(seed, "session-plan").shuffle(trials)
    return trials


RESPONSE_HEADER = ["distance_class", "gain", "answered_larger"]
PLAN_HEADER = ["distance_class", "gain", "repeat_index"]


def read_responses(fh: TextIO) -> list[ResponseSample]:
    """Parse a response CSV (header distance_class,gain,answered_larger; 0/1 booleans)."""
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty response file") from None
    if [h.strip() for h in header] != RESPONSE_HEADER:
        raise ValueError(f"line 1: expected header {','.join(RESPONSE_HEADER)!r}, got {','.join(header)!r}")
    samples: list[ResponseSample] = []
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 3:
            raise ValueError(f"line {lineno}: expected 3 fields, got {len(row)}")
        cls_raw, gain_raw, ans_raw = (field.strip() for field in row)
        try:
            cls = DistanceClass(cls_raw)
        except ValueError:
            raise ValueError(f"line {lineno}: unknown distance_class {cls_raw!r}") from None
        try:
            gain = float(gain_raw)
        except ValueError:
            raise ValueError(f"line {lineno}: bad gain {gain_raw!r}") from None
        if ans_raw not in ("0", "1"):
            raise ValueError(f"line {lineno}: answered_larger must be 0 or 1, got {ans_raw!r}")
        samples.append(ResponseSample(cls, gain, ans_raw == "1"))
    return samples


def fit_by_class(samples: Iterable[ResponseSample]) -> dict[DistanceClass, PsychometricFit]:
    grouped: dict[DistanceClass, list[ResponseSample]] = {}
    for s in samples:
        grouped.setdefault(s.distance_class, []).append(s)
    return {cls: fit_psychometric(group) for cls, group in grouped.items()}
