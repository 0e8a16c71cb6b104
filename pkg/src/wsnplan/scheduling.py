"""Payment scheduling with a linear lifetime function.

For a fixed number of visits the net present cost is convex in the
expenditures, so the optimum is characterized by a stationarity recursion
linking consecutive payments plus the horizon constraint. The exact
optimizer (method tag ONPC) solves that system; the equal-visit-lifetime
heuristic (EVL) simply splits the horizon evenly, which is near-optimal
when the interest rate and non-deferrable per-visit costs are small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import SolverError
from .lifetime import LifetimeFunction
from .npc import PaymentSchedule, UnscheduledStream, npc, schedule_from_tail
from .rootfind import bisect_then_secant

METHOD_EXACT = "ONPC"
METHOD_EQUAL_LIFETIME = "EVL"

FLAG_TOO_MANY_VISITS = "too_many_visits"
FLAG_PAYMENT_CAP_EXCEEDED = "payment_cap_exceeded"


@dataclass(frozen=True)
class VisitBreakdown:
    """One visit's expenditure split into hardware, energy, and labor."""

    visit: int
    payment: float
    lifetime_years: float
    time_years: float
    hardware: float
    energy: float
    labor: float


@dataclass(frozen=True)
class VisitCountCandidate:
    """Outcome of one fixed-visit-count solve inside the count search."""

    visit_count: int
    npc_value: float
    clamped: bool
    error: str | None = None
    schedule: PaymentSchedule | None = None


@dataclass(frozen=True)
class SchedulerResult:
    """A solved schedule with its cost, per-visit split, and diagnostics."""

    method: str
    schedule: PaymentSchedule
    npc_value: float
    flags: tuple[str, ...] = ()
    candidates: tuple[VisitCountCandidate, ...] = ()
    breakdown: tuple[VisitBreakdown, ...] = ()

    @property
    def visit_count(self) -> int:
        return self.schedule.visit_count

    @property
    def payments(self) -> tuple[float, ...]:
        return self.schedule.payments

    @property
    def lifetimes_years(self) -> tuple[float, ...]:
        return self.schedule.lifetimes_years


def _deferred_equivalent(payment: float, visit: int, lf: LifetimeFunction, interest_rate: float) -> float:
    """Stationarity image of a payment: what the next visit should spend.

    Uses the linear branch of the lifetime function without clamping, which
    keeps the expression monotone and continuous for root finding.
    """
    lifetime = lf.slope_years_per_dollar * payment + lf.intercept(visit)
    log_rate = math.log1p(interest_rate)
    exponent = lifetime * log_rate
    if exponent > 700.0:
        # the recursion compounds super-exponentially; saturate instead of
        # overflowing so bracket-endpoint probes stay well defined
        return math.inf
    return math.expm1(exponent) / (lf.slope_years_per_dollar * log_rate)


def next_payment(payment: float, visit: int, lf: LifetimeFunction, interest_rate: float) -> float:
    """Optimal expenditure of visit ``visit + 1`` given visit ``visit``'s.

    Clamps at the next visit's zero-lifetime threshold; hitting the clamp
    means the chosen visit count is too high to be optimal.
    """
    raw = _deferred_equivalent(payment, visit, lf, interest_rate)
    threshold = lf.threshold(visit + 1)
    return raw if raw > threshold else threshold


def _tail_payments(
    p2: float, visit_count: int, lf: LifetimeFunction, interest_rate: float
) -> tuple[list[float], bool]:
    payments = [p2]
    clamped = p2 <= lf.threshold(2)
    for visit in range(2, visit_count):
        nxt = next_payment(payments[-1], visit, lf, interest_rate)
        clamped = clamped or nxt <= lf.threshold(visit + 1)
        payments.append(nxt)
    return payments, clamped


def _first_payment_linear(
    tail: list[float], lf: LifetimeFunction, horizon_years: float
) -> float:
    """Close the horizon constraint; may extend below the visit-1 threshold."""
    m = lf.slope_years_per_dollar
    tail_lifetime = sum(m * p + lf.intercept(k) for k, p in enumerate(tail, start=2))
    return (horizon_years - tail_lifetime - lf.intercept(1)) / m


def optimal_payments(
    visit_count: int,
    lf: LifetimeFunction,
    interest_rate: float,
    horizon_years: float,
    rel_tol: float = 1e-10,
) -> tuple[PaymentSchedule, bool]:
    """Globally optimal expenditures for a fixed visit count of at least 2.

    Returns the schedule and a flag that is True when some visit sits at its
    zero-lifetime threshold (the visit count is too high to be optimal).
    The second visit's expenditure is found by root finding on the pairwise
    stationarity residual with the first visit eliminated through the
    horizon constraint; the rest follow from the payment recursion.
    """
    if visit_count < 2:
        raise ValueError("fixed-count optimization needs at least 2 visits")
    if visit_count > lf.max_visits:
        raise ValueError(
            f"visit_count {visit_count} exceeds the lifetime function's {lf.max_visits}"
        )

    def residual(p2: float) -> float:
        tail, _ = _tail_payments(p2, visit_count, lf, interest_rate)
        p1 = _first_payment_linear(tail, lf, horizon_years)
        return p2 - _deferred_equivalent(p1, 1, lf, interest_rate)

    lo = lf.threshold(2)
    hi = lf.payment_for_lifetime(2, horizon_years)
    if residual(lo) >= 0.0:
        p2 = lo  # stationarity already points below the threshold
    elif residual(hi) <= 0.0:
        raise SolverError(
            f"stationarity residual has no sign change for {visit_count} visits"
        )
    else:
        p2 = bisect_then_secant(residual, lo, hi, rel_tol=rel_tol)

    tail, clamped = _tail_payments(p2, visit_count, lf, interest_rate)
    schedule = schedule_from_tail(tail, lf, horizon_years)
    return schedule, clamped


def stationarity_residual(
    schedule: PaymentSchedule, lf: LifetimeFunction, interest_rate: float
) -> float:
    """Largest relative violation of the consecutive-payment optimality relation.

    Visits clamped at their threshold are skipped; for them the binding
    constraint replaces stationarity.
    """
    worst = 0.0
    for k in range(1, schedule.visit_count):
        p_next = schedule.payments[k]
        threshold = lf.threshold(k + 1)
        if p_next <= threshold * (1.0 + 1e-12):
            continue
        expected = _deferred_equivalent(schedule.payments[k - 1], k, lf, interest_rate)
        worst = max(worst, abs(p_next - expected) / max(1.0, abs(p_next)))
    return worst


def single_visit_schedule(lf: LifetimeFunction, horizon_years: float) -> PaymentSchedule:
    """The benchmark: one payment sized to reach the whole horizon."""
    payment = lf.payment_for_lifetime(1, horizon_years)
    return PaymentSchedule(payments=(payment,), lifetimes_years=(horizon_years,))


def optimal_number_of_visits(
    max_visits: int,
    lf: LifetimeFunction,
    interest_rate: float,
    horizon_years: float,
    unscheduled: UnscheduledStream | None = None,
    payment_caps: tuple[float, ...] | None = None,
    hardware_cost: float | None = None,
) -> SchedulerResult:
    """Search every visit count from 1 to ``max_visits`` for the lowest cost.

    Every count is evaluated (no early stopping) so the full cost-versus-
    count curve is available in ``candidates``; ties break toward fewer
    visits. Counts whose solve fails are recorded with a diagnostic and
    skipped.
    """
    if max_visits < 1:
        raise ValueError("max_visits must be >= 1")
    candidates: list[VisitCountCandidate] = []

    benchmark = single_visit_schedule(lf, horizon_years)
    best_value = npc(benchmark, interest_rate, unscheduled)
    best = (best_value, benchmark, False)
    candidates.append(VisitCountCandidate(1, best_value, False, None, benchmark))

    for count in range(2, max_visits + 1):
        try:
            schedule, clamped = optimal_payments(count, lf, interest_rate, horizon_years)
        except SolverError as exc:
            candidates.append(VisitCountCandidate(count, math.nan, False, str(exc), None))
            continue
        value = npc(schedule, interest_rate, unscheduled)
        candidates.append(VisitCountCandidate(count, value, clamped, None, schedule))
        if value < best[0]:
            best = (value, schedule, clamped)

    value, schedule, clamped = best
    flags = _schedule_flags(schedule, clamped, payment_caps)
    return SchedulerResult(
        method=METHOD_EXACT,
        schedule=schedule,
        npc_value=value,
        flags=flags,
        candidates=tuple(candidates),
        breakdown=visit_breakdowns(schedule, lf, hardware_cost=hardware_cost),
    )


def evl_schedule(
    visit_count: int,
    lf: LifetimeFunction,
    interest_rate: float,
    horizon_years: float,
    unscheduled: UnscheduledStream | None = None,
    hardware_cost: float | None = None,
) -> SchedulerResult:
    """Equal-visit-lifetime heuristic: every visit covers horizon / count."""
    if visit_count < 1:
        raise ValueError("visit_count must be >= 1")
    if visit_count > lf.max_visits:
        raise ValueError(
            f"visit_count {visit_count} exceeds the lifetime function's {lf.max_visits}"
        )
    share = horizon_years / visit_count
    payments = tuple(
        lf.payment_for_lifetime(k, share) for k in range(1, visit_count + 1)
    )
    schedule = PaymentSchedule(
        payments=payments, lifetimes_years=tuple(share for _ in payments)
    )
    return SchedulerResult(
        method=METHOD_EQUAL_LIFETIME,
        schedule=schedule,
        npc_value=npc(schedule, interest_rate, unscheduled),
        breakdown=visit_breakdowns(schedule, lf, hardware_cost=hardware_cost),
    )


def _schedule_flags(
    schedule: PaymentSchedule,
    clamped: bool,
    payment_caps: tuple[float, ...] | None,
) -> tuple[str, ...]:
    flags: list[str] = []
    if clamped:
        flags.append(FLAG_TOO_MANY_VISITS)
    if payment_caps is not None:
        for k, payment in enumerate(schedule.payments, start=1):
            cap = payment_caps[k - 1] if k - 1 < len(payment_caps) else math.inf
            if payment > cap * (1.0 + 1e-12):
                flags.append(f"{FLAG_PAYMENT_CAP_EXCEEDED}:visit={k}")
    return tuple(flags)


def visit_breakdowns(
    schedule: PaymentSchedule,
    lf: LifetimeFunction,
    hardware_cost: float | None = None,
    labor_costs: tuple[float, ...] | None = None,
) -> tuple[VisitBreakdown, ...]:
    """Split each visit expenditure into hardware, energy, and labor.

    The thresholds of the lifetime function pin labor for visits after the
    first and hardware-plus-labor for the first; when the hardware cost is
    not supplied it is inferred assuming labor does not change over time.
    """
    count = schedule.visit_count
    if labor_costs is None:
        later_labor = lf.threshold(2) if lf.max_visits >= 2 else 0.0
        labor = [later_labor] + [lf.threshold(k) for k in range(2, count + 1)]
    else:
        labor = list(labor_costs[:count])
    if hardware_cost is None:
        hardware_cost = lf.threshold(1) - labor[0]
    else:
        labor[0] = lf.threshold(1) - hardware_cost
    times = schedule.visit_times()
    rows = []
    for k in range(1, count + 1):
        hw = hardware_cost if k == 1 else 0.0
        payment = schedule.payments[k - 1]
        rows.append(
            VisitBreakdown(
                visit=k,
                payment=payment,
                lifetime_years=schedule.lifetimes_years[k - 1],
                time_years=times[k - 1],
                hardware=hw,
                energy=payment - hw - labor[k - 1],
                labor=labor[k - 1],
            )
        )
    return tuple(rows)
