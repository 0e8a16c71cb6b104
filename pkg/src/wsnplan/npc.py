"""Net-present-cost evaluation for arbitrary payment schedules.

All cash flows are outflows discounted at the per-year interest rate: the
first visit pays face value, later visits discount by the time already
elapsed, and unscheduled repairs are approximated as a periodic stream at
the network MTBF. Discount factors are computed as exp(-t * log1p(v)) so
tiny rates behave well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError
from .lifetime import LifetimeFunction
from .units import guarded_floor


def discount_factor(interest_rate: float, years: float) -> float:
    """Present-value multiplier (1+v)^-t for a payment ``years`` out."""
    return math.exp(-years * math.log1p(interest_rate))


@dataclass(frozen=True)
class UnscheduledStream:
    """Deterministic stand-in for repair payments: one every MTBF years.

    The number of repairs over the horizon is floor(horizon / mtbf) with an
    epsilon guard so an exact integer ratio never drops the last repair.
    An infinite MTBF (zero failure rate) yields an empty stream.
    """

    mtbf_years: float
    repair_cost: float
    horizon_years: float

    def __post_init__(self):
        if self.mtbf_years <= 0:
            raise ValueError("mtbf_years must be > 0")

    @property
    def count(self) -> int:
        if math.isinf(self.mtbf_years):
            return 0
        return guarded_floor(self.horizon_years / self.mtbf_years)

    def failure_times(self) -> tuple[float, ...]:
        return tuple(n * self.mtbf_years for n in range(1, self.count + 1))

    def npc(self, interest_rate: float) -> float:
        total = 0.0
        for n in range(1, self.count + 1):
            total += self.repair_cost * discount_factor(interest_rate, n * self.mtbf_years)
        return total


@dataclass(frozen=True)
class PaymentSchedule:
    """Visit expenditures with their lifetimes and derived visit times."""

    payments: tuple[float, ...]
    lifetimes_years: tuple[float, ...]

    def __post_init__(self):
        if not self.payments:
            raise ValueError("a schedule needs at least one visit")
        if len(self.payments) != len(self.lifetimes_years):
            raise ValueError("payments and lifetimes must align")
        if any(p < 0 for p in self.payments):
            raise InfeasibleError("visit expenditures must be >= 0")
        if any(t < 0 for t in self.lifetimes_years):
            raise InfeasibleError("visit lifetimes must be >= 0")

    @classmethod
    def from_payments(cls, payments, lf: LifetimeFunction) -> "PaymentSchedule":
        """Derive lifetimes from a lifetime function (clamped at zero)."""
        pays = tuple(float(p) for p in payments)
        lifetimes = tuple(lf.lifetime(k, p) for k, p in enumerate(pays, start=1))
        return cls(payments=pays, lifetimes_years=lifetimes)

    @property
    def visit_count(self) -> int:
        return len(self.payments)

    def visit_times(self) -> tuple[float, ...]:
        """Time of each visit in years; the first visit is at time zero."""
        times = [0.0]
        for lifetime in self.lifetimes_years[:-1]:
            times.append(times[-1] + lifetime)
        return tuple(times)

    def activity_flags(self) -> tuple[bool, ...]:
        return tuple(p > 0 for p in self.payments)

    def total_lifetime_years(self) -> float:
        return sum(self.lifetimes_years)

    def achieves_horizon(self, horizon_years: float, rel_tol: float = 1e-9) -> bool:
        return math.isclose(
            self.total_lifetime_years(), horizon_years, rel_tol=rel_tol, abs_tol=rel_tol
        )


def npc(
    schedule: PaymentSchedule,
    interest_rate: float,
    unscheduled: UnscheduledStream | None = None,
) -> float:
    """Net present cost of a schedule plus an optional repair stream."""
    total = schedule.payments[0]
    for payment, when in zip(schedule.payments[1:], schedule.visit_times()[1:]):
        total += payment * discount_factor(interest_rate, when)
    if unscheduled is not None:
        total += unscheduled.npc(interest_rate)
    return total


def percent_savings(benchmark: float, optimized: float) -> float:
    """Relative gap |benchmark - optimized| / benchmark.

    ``benchmark`` is the single-visit cost of reaching the full horizon.
    """
    if not benchmark > 0:
        raise ValueError("benchmark cost must be > 0")
    return abs(benchmark - optimized) / benchmark


def schedule_from_tail(
    tail_payments,
    lf: LifetimeFunction,
    horizon_years: float,
) -> PaymentSchedule:
    """Complete a schedule from visits 2..K, sizing the first visit to hit the horizon.

    The tail lifetimes use the linear branch of the lifetime function; the
    first visit gets whatever lifetime remains, which must be non-negative.
    """
    tail = tuple(float(p) for p in tail_payments)
    tail_lifetimes = tuple(
        lf.slope_years_per_dollar * p + lf.intercept(k)
        for k, p in enumerate(tail, start=2)
    )
    first_lifetime = horizon_years - sum(tail_lifetimes)
    if first_lifetime < -1e-9 * max(1.0, horizon_years):
        raise InfeasibleError("tail lifetimes exceed the operational horizon")
    first_lifetime = max(first_lifetime, 0.0)
    first_payment = lf.payment_for_lifetime(1, first_lifetime)
    return PaymentSchedule(
        payments=(first_payment,) + tail,
        lifetimes_years=(first_lifetime,) + tail_lifetimes,
    )


def grid_oracle_minimize(
    lf: LifetimeFunction,
    visit_count: int,
    interest_rate: float,
    horizon_years: float,
    grid_step: float,
    unscheduled: UnscheduledStream | None = None,
) -> tuple[tuple[float, ...], float]:
    """Exhaustive grid search over the tail expenditures for 2 or 3 visits.

    The first visit is eliminated through the horizon constraint. Intended
    as an independent check of the exact optimizer, not for production use.
    """
    if visit_count not in (2, 3):
        raise ValueError("grid oracle supports 2 or 3 visits")
    if grid_step <= 0:
        raise ValueError("grid_step must be > 0")
    m = lf.slope_years_per_dollar
    log_rate = math.log1p(interest_rate)
    b1 = lf.intercept(1)
    repair_const = unscheduled.npc(interest_rate) if unscheduled is not None else 0.0

    def axis(visit: int) -> np.ndarray:
        lo = lf.threshold(visit)
        hi = lf.payment_for_lifetime(visit, horizon_years)
        return np.arange(lo, hi + 0.5 * grid_step, grid_step)

    if visit_count == 2:
        p2 = axis(2)
        t2 = m * p2 + lf.intercept(2)
        t1 = horizon_years - t2
        feasible = t1 >= -1e-12
        if not feasible.any():
            raise InfeasibleError("no feasible grid point for 2 visits")
        p2, t1 = p2[feasible], np.maximum(t1[feasible], 0.0)
        p1 = (t1 - b1) / m
        values = p1 + p2 * np.exp(-t1 * log_rate)
        best = int(np.argmin(values))
        return (float(p1[best]), float(p2[best])), float(values[best]) + repair_const

    p2_axis, p3_axis = axis(2), axis(3)
    best_value = math.inf
    best_point: tuple[float, ...] | None = None
    t3_axis = m * p3_axis + lf.intercept(3)
    for p2 in p2_axis:
        t2 = m * p2 + lf.intercept(2)
        t1 = horizon_years - t2 - t3_axis
        feasible = t1 >= -1e-12
        if not feasible.any():
            continue
        p3 = p3_axis[feasible]
        t1ok = np.maximum(t1[feasible], 0.0)
        p1 = (t1ok - b1) / m
        values = (
            p1
            + p2 * np.exp(-t1ok * log_rate)
            + p3 * np.exp(-(t1ok + t2) * log_rate)
        )
        idx = int(np.argmin(values))
        if values[idx] < best_value:
            best_value = float(values[idx])
            best_point = (float(p1[idx]), float(p2), float(p3[idx]))
    if best_point is None:
        raise InfeasibleError("no feasible grid point for 3 visits")
    return best_point, best_value + repair_const
