import math
import random

import pytest

from wsnplan import (
    LifetimeFunction,
    UnscheduledStream,
    evl_schedule,
    grid_oracle_minimize,
    next_payment,
    npc,
    optimal_number_of_visits,
    optimal_payments,
    schedule_from_tail,
    single_visit_schedule,
    stationarity_residual,
)
from wsnplan.scheduling import FLAG_PAYMENT_CAP_EXCEEDED, FLAG_TOO_MANY_VISITS

from conftest import make_econ, make_lifetime_function

LF = make_lifetime_function()
RATE = 0.1
HORIZON = 10.0
STREAM = UnscheduledStream(1.0, 1000.0, HORIZON)


def test_next_payment_reference_value():
    # one-year lifetime at the defaults defers to about $4102.9
    p_k = LF.payment_for_lifetime(2, 1.0)
    deferred = next_payment(p_k, 2, LF, RATE)
    assert deferred == pytest.approx(4102.88, abs=0.01)
    assert LF.lifetime(3, deferred) == pytest.approx(0.793482, abs=1e-5)


def test_next_payment_tiny_rate_shrinks_lifetime_by_intercept():
    p_k = LF.payment_for_lifetime(2, 1.0)
    deferred = next_payment(p_k, 2, LF, 1e-9)
    drop = LF.lifetime(3, deferred) - 1.0
    assert drop == pytest.approx(LF.intercept(3), abs=1e-6)


def test_next_payment_clamps_at_threshold():
    at_zero = LF.threshold(2)
    assert next_payment(at_zero, 2, LF, RATE) == LF.threshold(3)


def test_optimal_payments_respects_horizon_and_kkt():
    for count in (2, 3, 5, 8, 12):
        schedule, clamped = optimal_payments(count, LF, RATE, HORIZON)
        assert not clamped
        assert schedule.total_lifetime_years() == pytest.approx(HORIZON, rel=1e-9)
        assert stationarity_residual(schedule, LF, RATE) <= 1e-8
        for k, payment in enumerate(schedule.payments, start=1):
            assert payment >= LF.threshold(k) - 1e-9


def test_optimal_payments_matches_grid_oracle():
    for count, step in ((2, 40.0), (3, 60.0)):
        schedule, _ = optimal_payments(count, LF, RATE, HORIZON)
        ours = npc(schedule, RATE)
        _, oracle_value = grid_oracle_minimize(LF, count, RATE, HORIZON, grid_step=step)
        assert ours <= oracle_value + 1e-9
        # one-grid-cell variation bound around our optimum
        tail = schedule.payments[1:]
        worst = 0.0
        for idx in range(len(tail)):
            for sign in (-1.0, 1.0):
                moved = list(tail)
                moved[idx] += sign * step
                try:
                    value = npc(schedule_from_tail(moved, LF, HORIZON), RATE)
                except Exception:
                    continue
                worst = max(worst, value - ours)
        assert oracle_value <= ours + worst + 1e-9


def test_planted_grid_optimum_matches_exactly():
    schedule, _ = optimal_payments(2, LF, RATE, HORIZON)
    p2 = schedule.payments[1]
    # choose the step so the optimum sits on the grid
    steps_to_p2 = 64
    step = (p2 - LF.threshold(2)) / steps_to_p2
    _, oracle_value = grid_oracle_minimize(LF, 2, RATE, HORIZON, grid_step=step)
    assert oracle_value == pytest.approx(npc(schedule, RATE), rel=1e-9)


def test_too_many_visits_clamps_and_flags():
    # a short horizon cannot profitably fund many visits
    schedule, clamped = optimal_payments(12, LF, RATE, 0.5)
    assert clamped
    zero_lifetime = [t for t in schedule.lifetimes_years if t == 0.0]
    assert zero_lifetime
    # clamped visits sit exactly at their thresholds
    for k, (payment, lifetime) in enumerate(
        zip(schedule.payments, schedule.lifetimes_years), start=1
    ):
        if lifetime == 0.0 and k >= 2:
            assert payment == pytest.approx(LF.threshold(k), rel=1e-12)


def test_single_visit_schedule_is_benchmark():
    schedule = single_visit_schedule(LF, HORIZON)
    assert schedule.payments[0] == pytest.approx(41604.64, abs=0.01)
    assert npc(schedule, RATE, STREAM) == pytest.approx(47749.207, abs=0.01)


def test_optimal_number_of_visits_default_curve():
    result = optimal_number_of_visits(30, LF, RATE, HORIZON, unscheduled=STREAM)
    assert result.method == "ONPC"
    assert result.visit_count == 5
    assert result.npc_value == pytest.approx(38871.70, abs=0.01)
    counts = [cand.visit_count for cand in result.candidates]
    assert counts == list(range(1, 31))
    values = {cand.visit_count: cand.npc_value for cand in result.candidates}
    assert values[1] == pytest.approx(47749.207, abs=0.01)
    assert all(result.npc_value <= v + 1e-9 for v in values.values())
    # dominated counts are flagged, never selected
    clamped = [cand.visit_count for cand in result.candidates if cand.clamped]
    assert all(values[c] >= result.npc_value for c in clamped)


def test_ties_break_toward_fewer_visits():
    lf = LifetimeFunction(slope_years_per_dollar=1.0, intercepts_years=(0.0, 0.0, 0.0))
    result = optimal_number_of_visits(3, lf, 1e-12, 1.0)
    assert result.visit_count == 1


def test_labor_cost_shifts_optimum():
    econ140 = make_econ(labor_cost_per_visit=140.0)
    lf140 = make_lifetime_function(econ140)
    base = optimal_number_of_visits(30, LF, RATE, HORIZON, unscheduled=STREAM)
    cheap = optimal_number_of_visits(30, lf140, RATE, HORIZON, unscheduled=STREAM)
    assert cheap.visit_count > base.visit_count
    assert cheap.npc_value < base.npc_value


def test_breakdown_splits_each_payment():
    result = optimal_number_of_visits(
        30, LF, RATE, HORIZON, unscheduled=STREAM, hardware_cost=1500.0
    )
    assert len(result.breakdown) == result.visit_count
    first = result.breakdown[0]
    assert first.hardware == 1500.0
    assert first.labor == pytest.approx(1000.0, rel=1e-9)
    for row in result.breakdown:
        assert row.hardware + row.energy + row.labor == pytest.approx(
            row.payment, rel=1e-12
        )
        if row.visit >= 2:
            assert row.hardware == 0.0
            assert row.labor == pytest.approx(1000.0, rel=1e-9)


def test_payment_cap_flagging():
    caps = tuple([5000.0] * 30)
    result = optimal_number_of_visits(
        30, LF, RATE, HORIZON, unscheduled=STREAM, payment_caps=caps
    )
    assert any(flag.startswith(FLAG_PAYMENT_CAP_EXCEEDED) for flag in result.flags)
    # caps do not silently alter the schedule
    unflagged = optimal_number_of_visits(30, LF, RATE, HORIZON, unscheduled=STREAM)
    assert result.payments == unflagged.payments


def test_evl_single_visit_equals_benchmark():
    evl = evl_schedule(1, LF, RATE, HORIZON, unscheduled=STREAM)
    assert evl.method == "EVL"
    assert evl.npc_value == pytest.approx(npc(single_visit_schedule(LF, HORIZON), RATE, STREAM))


def test_evl_close_at_optimum_but_worse_for_many_visits():
    exact = optimal_number_of_visits(30, LF, RATE, HORIZON, unscheduled=STREAM)
    evl_at_best = evl_schedule(exact.visit_count, LF, RATE, HORIZON, unscheduled=STREAM)
    gap_at_best = abs(evl_at_best.npc_value - exact.npc_value) / exact.npc_value
    assert gap_at_best <= 1e-4
    values = {cand.visit_count: cand.npc_value for cand in exact.candidates}
    gaps = []
    for count in (exact.visit_count, 15, 25, 30):
        evl = evl_schedule(count, LF, RATE, HORIZON, unscheduled=STREAM)
        gaps.append(abs(evl.npc_value - values[count]) / values[count])
    assert gaps[-1] > gaps[0]
    assert all(b >= a - 1e-12 for a, b in zip(gaps, gaps[1:]))


def test_evl_lifetimes_and_flags():
    evl = evl_schedule(4, LF, RATE, HORIZON)
    assert evl.lifetimes_years == tuple([HORIZON / 4] * 4)
    assert evl.schedule.achieves_horizon(HORIZON)
    assert evl.flags == ()


def test_randomized_instances_meet_oracle_and_kkt():
    rng = random.Random(90210)
    for trial in range(20):
        count = rng.choice([2, 3])
        slope = 10 ** rng.uniform(-4.5, -2.5)
        b1 = -rng.uniform(0.01, 1.2)
        bk = -rng.uniform(0.001, 0.4)
        horizon = rng.uniform(3.0, 15.0)
        rate = rng.uniform(0.02, 0.15)
        lf = LifetimeFunction(
            slope_years_per_dollar=slope,
            intercepts_years=(b1,) + tuple([bk] * (count - 1)),
        )
        schedule, clamped = optimal_payments(count, lf, rate, horizon)
        assert schedule.total_lifetime_years() == pytest.approx(horizon, rel=1e-9)
        assert stationarity_residual(schedule, lf, rate) <= 1e-8
        step = (lf.payment_for_lifetime(2, horizon) - lf.threshold(2)) / 150.0
        _, oracle_value = grid_oracle_minimize(lf, count, rate, horizon, grid_step=step)
        ours = npc(schedule, rate)
        assert ours <= oracle_value + 1e-9
        assert oracle_value <= ours + _cell_variation(schedule, lf, horizon, rate, step) + 1e-9


def _cell_variation(schedule, lf, horizon, rate, step):
    base = npc(schedule, rate)
    worst = 0.0
    tail = schedule.payments[1:]
    for idx in range(len(tail)):
        for sign in (-1.0, 1.0):
            moved = list(tail)
            moved[idx] = max(moved[idx] + sign * step, lf.threshold(idx + 2))
            try:
                value = npc(schedule_from_tail(moved, lf, horizon), rate)
            except Exception:
                continue
            worst = max(worst, value - base)
    return worst
