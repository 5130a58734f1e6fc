"""Gain model and psychometric fitting tests.

The fitter's maximum-likelihood claim is checked against an independent
oracle defined first: a zooming grid search over (slope, inflection point) in
pure Python, sharing no code with the Newton implementation.
"""

import io
import math
import statistics

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blindwalk.gain import (
    CLASS_DISTANCE,
    CLASS_GAINS,
    DEFAULT_THRESHOLDS,
    Direction,
    DistanceClass,
    GainThresholds,
    PlannedTrial,
    ResponseSample,
    SESSION_REPEATS,
    ThresholdRow,
    detection_range,
    fit_by_class,
    fit_psychometric,
    logistic,
    max_imperceptible_step,
    plan_threshold_session,
    pse,
    read_responses,
    thresholds_at,
    wall_movement_gain,
)
from blindwalk.rng import stream

LN3 = math.log(3.0)

TABLE = {
    1.0: (0.899, 1.020, 1.145),
    2.0: (0.868, 1.030, 1.200),
    3.0: (0.737, 0.974, 1.211),
}


# ---------- oracle ----------


def grid_search_nll(samples) -> float:
    """Global NLL minimum by zooming grid search over (a, pse), b = -a * pse.

    Pure-python likelihood, aggregation by dict, different parameterization
    from the production fitter; six refinement rounds reach ~1e-12 in value.
    """
    cells: dict[float, tuple[int, int]] = {}
    for s in samples:
        n, k = cells.get(s.gain, (0, 0))
        cells[s.gain] = (n + 1, k + (1 if s.answered_larger else 0))

    def nll(a: float, b: float) -> float:
        total = 0.0
        for x, (n, k) in cells.items():
            z = a * x + b
            lse = z + math.log1p(math.exp(-z)) if z > 0 else math.log1p(math.exp(z))
            total -= k * -lse + (n - k) * (z - lse)
        return total

    a_lo, a_hi = -200.0, -0.01
    p_lo, p_hi = 0.2, 1.8
    best = math.inf
    for _ in range(6):
        pts = 61
        round_best = (math.inf, 0.0, 0.0)
        for i in range(pts):
            a = a_lo + (a_hi - a_lo) * i / (pts - 1)
            for j in range(pts):
                ps = p_lo + (p_hi - p_lo) * j / (pts - 1)
                v = nll(a, -a * ps)
                if v < round_best[0]:
                    round_best = (v, a, ps)
        best, a0, p0 = round_best
        step_a = (a_hi - a_lo) / (pts - 1)
        step_p = (p_hi - p_lo) / (pts - 1)
        a_lo, a_hi = a0 - 2 * step_a, min(a0 + 2 * step_a, -1e-6)
        p_lo, p_hi = p0 - 2 * step_p, p0 + 2 * step_p
    return best


def true_params(distance_class: DistanceClass) -> tuple[float, float]:
    """Logistic (a, b) whose quartiles and midpoint match the threshold table."""
    row = {
        DistanceClass.SHORT: TABLE[1.0],
        DistanceClass.MIDDLE: TABLE[2.0],
        DistanceClass.LONG: TABLE[3.0],
    }[distance_class]
    lower, mid, upper = row
    a = -2.0 * LN3 / (upper - lower)
    return a, -a * mid


def synth_responses(seed: int, participants: int = 20) -> dict[DistanceClass, list[ResponseSample]]:
    """Simulated two-alternative responses for one synthetic session."""
    rng = stream(seed, "synthetic-responses")
    per_class: dict[DistanceClass, list[ResponseSample]] = {}
    for participant in range(participants):
        for trial in plan_threshold_session(seed * 1009 + participant):
            a, b = true_params(trial.distance_class)
            p = logistic(a, b, trial.gain)
            per_class.setdefault(trial.distance_class, []).append(
                ResponseSample(trial.distance_class, trial.gain, rng.random() < p)
            )
    return per_class


# ---------- threshold table ----------


def test_threshold_table_values_exact():
    for row in DEFAULT_THRESHOLDS.rows:
        lower, mid, upper = TABLE[row.distance]
        assert row.lower == lower
        assert row.pse == mid
        assert row.upper == upper
    assert [r.distance for r in DEFAULT_THRESHOLDS.rows] == [1.0, 2.0, 3.0]


def test_thresholds_at_rows_exact():
    for d, expected in TABLE.items():
        got = thresholds_at(DEFAULT_THRESHOLDS, d)
        assert got == expected


def test_thresholds_at_interpolates_midway():
    lower, mid, upper = thresholds_at(DEFAULT_THRESHOLDS, 2.5)
    assert lower == pytest.approx(0.8025, abs=1e-12)
    assert mid == pytest.approx(1.002, abs=1e-12)
    assert upper == pytest.approx(1.2055, abs=1e-12)


def test_thresholds_at_clamps_outside_measured_range():
    assert thresholds_at(DEFAULT_THRESHOLDS, 0.4) == TABLE[1.0]
    assert thresholds_at(DEFAULT_THRESHOLDS, 9.0) == TABLE[3.0]


def test_thresholds_at_rejects_nonpositive_distance():
    with pytest.raises(ValueError):
        thresholds_at(DEFAULT_THRESHOLDS, 0.0)
    with pytest.raises(ValueError):
        thresholds_at(DEFAULT_THRESHOLDS, -1.0)


@settings(max_examples=200, deadline=None)
@given(d=st.floats(min_value=0.01, max_value=10.0))
def test_thresholds_at_continuous_and_banded(d):
    lower, mid, upper = thresholds_at(DEFAULT_THRESHOLDS, d)
    assert lower < 1.0 < upper
    assert lower < mid < upper
    nearby = thresholds_at(DEFAULT_THRESHOLDS, d + 1e-9)
    assert nearby == pytest.approx((lower, mid, upper), abs=1e-6)


def test_threshold_rows_must_be_sorted_and_banded():
    with pytest.raises(ValueError):
        GainThresholds(rows=(
            ThresholdRow(2.0, 0.868, 1.030, 1.200),
            ThresholdRow(1.0, 0.899, 1.020, 1.145),
        ))
    with pytest.raises(ValueError):
        GainThresholds(rows=(ThresholdRow(1.0, 1.01, 1.02, 1.145),))


# ---------- movement gain and step budgets ----------


def test_wall_movement_gain():
    assert wall_movement_gain(2.0, 2.4) == pytest.approx(1.2, abs=1e-15)
    assert wall_movement_gain(2.0, 1.6) == pytest.approx(0.8, abs=1e-15)
    with pytest.raises(ValueError):
        wall_movement_gain(0.0, 1.0)
    with pytest.raises(ValueError):
        wall_movement_gain(1.0, -0.1)


def test_max_imperceptible_step_reference_values():
    assert max_imperceptible_step(DEFAULT_THRESHOLDS, 3.0, Direction.TOWARD) == pytest.approx(0.789, abs=1e-12)
    assert max_imperceptible_step(DEFAULT_THRESHOLDS, 3.0, Direction.AWAY) == pytest.approx(0.633, abs=1e-12)
    assert max_imperceptible_step(DEFAULT_THRESHOLDS, 1.0, Direction.TOWARD) == pytest.approx(0.101, abs=1e-12)


def test_max_imperceptible_step_is_linear_where_thresholds_clamp():
    # Below the measured range the ratios freeze, so the budget is linear in d.
    s1 = max_imperceptible_step(DEFAULT_THRESHOLDS, 0.2, Direction.AWAY)
    s2 = max_imperceptible_step(DEFAULT_THRESHOLDS, 0.4, Direction.AWAY)
    assert s2 == pytest.approx(2.0 * s1, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(d=st.floats(min_value=0.05, max_value=8.0))
def test_max_imperceptible_step_consistent_with_thresholds(d):
    lower, _, upper = thresholds_at(DEFAULT_THRESHOLDS, d)
    away = max_imperceptible_step(DEFAULT_THRESHOLDS, d, Direction.AWAY)
    toward = max_imperceptible_step(DEFAULT_THRESHOLDS, d, Direction.TOWARD)
    assert away == pytest.approx(d * (upper - 1.0), rel=1e-12)
    assert toward == pytest.approx(d * (1.0 - lower), rel=1e-12)
    assert away > 0.0 and toward > 0.0
    # Moving by the full budget lands exactly on the detection threshold.
    assert wall_movement_gain(d, d + away) == pytest.approx(upper, rel=1e-12)
    assert wall_movement_gain(d, d - toward) == pytest.approx(lower, rel=1e-12)


# ---------- analytic identities ----------


def test_logistic_midpoint_and_quartiles_identities():
    rng = stream(0, "identity-check")
    for _ in range(1000):
        a = -math.exp(rng.uniform(math.log(0.5), math.log(60.0)))
        mid = rng.uniform(0.5, 1.5)
        b = -a * mid
        fit = type("F", (), {"a": a, "b": b})()
        assert abs(logistic(a, b, pse(fit)) - 0.5) <= 1e-12
        lo, hi = detection_range(fit)
        assert lo < pse(fit) < hi
        assert abs(logistic(a, b, lo) - 0.25) <= 1e-12
        assert abs(logistic(a, b, hi) - 0.75) <= 1e-12
        assert abs((hi - lo) - 2.0 * LN3 / abs(a)) <= 1e-12 * max(1.0, hi - lo)


def test_logistic_is_stable_at_extreme_arguments():
    assert logistic(-50.0, 0.0, 20.0) == pytest.approx(1.0, abs=1e-12)
    assert logistic(-50.0, 0.0, -20.0) == pytest.approx(0.0, abs=1e-12)
    assert 0.0 <= logistic(-1000.0, 500.0, 100.0) <= 1.0


# ---------- fitting ----------


def test_fit_matches_grid_oracle_nll():
    per_class = synth_responses(seed=11)
    for cls in (DistanceClass.SHORT, DistanceClass.MIDDLE, DistanceClass.LONG):
        samples = per_class[cls]
        fit = fit_psychometric(samples)
        oracle = grid_search_nll(samples)
        assert -fit.log_likelihood == pytest.approx(oracle, abs=1e-6)
        assert fit.a < 0.0
        assert not fit.warning


def test_fit_recovers_known_parameters_closely():
    per_class = synth_responses(seed=5, participants=200)  # plenty of data
    for cls, samples in per_class.items():
        a_true, b_true = true_params(cls)
        fit = fit_psychometric(samples)
        assert pse(fit) == pytest.approx(-b_true / a_true, abs=0.01)
        # The slope is weakly identified on narrow gain grids; allow a loose band.
        assert fit.a == pytest.approx(a_true, rel=0.3)


def test_fit_is_order_invariant():
    samples = synth_responses(seed=3)[DistanceClass.MIDDLE]
    fit1 = fit_psychometric(samples)
    fit2 = fit_psychometric(list(reversed(samples)))
    assert fit1.a == fit2.a and fit1.b == fit2.b
    rng = stream(9, "shuffle")
    shuffled = list(samples)
    rng.shuffle(shuffled)
    fit3 = fit_psychometric(shuffled)
    assert fit1.a == fit3.a and fit1.b == fit3.b


def test_fit_flags_single_valued_responses():
    gains = CLASS_GAINS[DistanceClass.MIDDLE]
    all_larger = [ResponseSample(DistanceClass.MIDDLE, g, True) for g in gains for _ in range(5)]
    fit = fit_psychometric(all_larger)
    assert fit.warning
    all_smaller = [ResponseSample(DistanceClass.MIDDLE, g, False) for g in gains for _ in range(5)]
    fit = fit_psychometric(all_smaller)
    assert fit.warning


def test_fit_rejects_inverted_responses():
    # Confident "larger" at low gains and "smaller" at high gains demands a
    # rising-then-falling curve no logistic of the right sign can produce.
    samples = []
    for g in (0.8, 0.9):
        samples += [ResponseSample(DistanceClass.LONG, g, True)] * 20
    for g in (1.1, 1.2):
        samples += [ResponseSample(DistanceClass.LONG, g, False)] * 20
    with pytest.raises(ValueError):
        fit_psychometric(samples)


def test_fit_requires_samples():
    with pytest.raises(ValueError):
        fit_psychometric([])


def test_separable_data_warns_but_still_reports_finite_fit():
    samples = [ResponseSample(DistanceClass.LONG, 0.8, False)] * 10
    samples += [ResponseSample(DistanceClass.LONG, 1.2, True)] * 10
    fit = fit_psychometric(samples)
    assert fit.warning
    assert math.isfinite(fit.a) and math.isfinite(fit.b)
    assert math.isfinite(fit.log_likelihood)


def test_fit_by_class_splits_samples():
    per_class = synth_responses(seed=2)
    pooled = [s for samples in per_class.values() for s in samples]
    fits = fit_by_class(pooled)
    assert set(fits) == set(per_class)
    for cls, samples in per_class.items():
        alone = fit_psychometric(samples)
        assert fits[cls].a == alone.a and fits[cls].b == alone.b


# ---------- session planning ----------


def test_plan_counts_and_composition():
    plan = plan_threshold_session(seed=0)
    assert len(plan) == 45
    for cls in DistanceClass:
        trials = [t for t in plan if t.distance_class is cls]
        assert len(trials) == 15
        expected = sorted(CLASS_GAINS[cls] * SESSION_REPEATS)
        assert sorted(t.gain for t in trials) == expected
        for gain in CLASS_GAINS[cls]:
            repeats = sorted(t.repeat_index for t in trials if t.gain == gain)
            assert repeats == list(range(SESSION_REPEATS))


def test_plan_gain_sets_per_class():
    assert CLASS_GAINS[DistanceClass.SHORT] == (0.9, 0.95, 1.0, 1.05, 1.1)
    assert CLASS_GAINS[DistanceClass.MIDDLE] == (0.8, 0.9, 1.0, 1.1, 1.2)
    assert CLASS_GAINS[DistanceClass.LONG] == (0.8, 0.9, 1.0, 1.1, 1.2)
    assert CLASS_DISTANCE == {
        DistanceClass.SHORT: 1.0,
        DistanceClass.MIDDLE: 2.0,
        DistanceClass.LONG: 3.0,
    }


def test_plan_deterministic_per_seed():
    assert plan_threshold_session(7) == plan_threshold_session(7)
    assert plan_threshold_session(7) != plan_threshold_session(8)


def test_plan_orders_distinct_across_seeds():
    orders = {tuple((t.distance_class, t.gain, t.repeat_index) for t in plan_threshold_session(s)) for s in range(100)}
    assert len(orders) >= 99


# ---------- response CSV ----------


def test_read_responses_round_trip():
    text = "distance_class,gain,answered_larger\nLong,0.8,0\nShort,1.05,1\n"
    samples = read_responses(io.StringIO(text))
    assert samples == [
        ResponseSample(DistanceClass.LONG, 0.8, False),
        ResponseSample(DistanceClass.SHORT, 1.05, True),
    ]


def test_read_responses_skips_blank_lines():
    text = "distance_class,gain,answered_larger\n\nMiddle,1.0,1\n\n"
    assert len(read_responses(io.StringIO(text))) == 1


def test_read_responses_rejects_wrong_header():
    with pytest.raises(ValueError, match="line 1"):
        read_responses(io.StringIO("gain,distance_class,answered_larger\nLong,0.8,0\n"))


def test_read_responses_rejects_bad_fields():
    with pytest.raises(ValueError, match="line 2"):
        read_responses(io.StringIO("distance_class,gain,answered_larger\nNowhere,0.8,0\n"))
    with pytest.raises(ValueError, match="line 3"):
        read_responses(io.StringIO("distance_class,gain,answered_larger\nLong,0.8,0\nLong,0.9,maybe\n"))
    with pytest.raises(ValueError, match="line 2"):
        read_responses(io.StringIO("distance_class,gain,answered_larger\nLong,not-a-number,0\n"))


# ---------- end-to-end parameter recovery ----------


def test_recovery_medians_across_sessions():
    errs = {"pse": [], "x25": [], "x75": []}
    per_class_errs = {cls: {"pse": [], "x25": [], "x75": []} for cls in DistanceClass}
    for session_idx in range(40):
        for cls, samples in synth_responses(seed=session_idx).items():
            a_true, b_true = true_params(cls)
            fit = fit_psychometric(samples)
            lo, hi = detection_range(fit)
            e_pse = abs(pse(fit) - (-b_true / a_true))
            e_lo = abs(lo - (LN3 - b_true) / a_true)
            e_hi = abs(hi - (-LN3 - b_true) / a_true)
            errs["pse"].append(e_pse)
            errs["x25"].append(e_lo)
            errs["x75"].append(e_hi)
            per_class_errs[cls]["pse"].append(e_pse)
            per_class_errs[cls]["x25"].append(e_lo)
            per_class_errs[cls]["x75"].append(e_hi)
    assert statistics.median(errs["pse"]) <= 0.02
    assert statistics.median(errs["x25"]) <= 0.05
    assert statistics.median(errs["x75"]) <= 0.05
    for cls in DistanceClass:
        assert statistics.median(per_class_errs[cls]["pse"]) <= 0.02
