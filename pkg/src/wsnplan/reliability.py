"""Hardware grade / redundancy selection against unscheduled-repair cost.

Buying sturdier nodes or putting spares in stand-by at every location
raises the initial hardware bill but stretches the time between network
failures, shrinking the discounted repair stream. Each candidate choice is
priced as initial hardware plus the present cost of its repair stream, and
the cheapest wins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .npc import discount_factor
from .units import guarded_floor, per_hour_to_per_year


@dataclass(frozen=True)
class HardwareChoice:
    """A per-location hardware option: cost and failure rate, optionally
    derived from a base option by an integer redundancy factor."""

    id: str
    cost: float
    failure_rate_per_hour: float
    redundancy: int | None = None

    def __post_init__(self):
        if not self.cost > 0:
            raise ValueError(f"choice {self.id!r}: cost must be > 0")
        if not self.failure_rate_per_hour > 0:
            raise ValueError(f"choice {self.id!r}: failure rate must be > 0")


def redundancy_sweep(
    base_cost: float,
    base_failure_rate_per_hour: float,
    levels,
) -> tuple[HardwareChoice, ...]:
    """Choices obtained by placing 1..G nodes per location.

    With Poisson failures, G nodes in cold stand-by divide the per-location
    failure rate by G while multiplying the cost by G, keeping the
    cost-rate product constant.
    """
    choices = []
    for level in levels:
        g = int(level)
        if g < 1:
            raise ValueError("redundancy levels must be >= 1")
        choices.append(
            HardwareChoice(
                id=f"redundancy-{g}",
                cost=base_cost * g,
                failure_rate_per_hour=base_failure_rate_per_hour / g,
                redundancy=g,
            )
        )
    return tuple(choices)


def choice_cost(
    choice: HardwareChoice,
    node_count: int,
    horizon_years: float,
    interest_rate: float,
    repair_cost: float,
) -> float:
    """Initial hardware plus the discounted cost of the expected repairs.

    Failures are spread evenly at the per-location MTBF scaled by the node
    count; each repair pays the call-out cost plus replacement hardware for
    the failed location.
    """
    rate_per_year = per_hour_to_per_year(choice.failure_rate_per_hour)
    group_rate = node_count * rate_per_year
    hardware = node_count * choice.cost
    failures = guarded_floor(horizon_years * group_rate)
    if failures == 0:
        return hardware
    per_repair = repair_cost + choice.cost
    total = hardware
    for n in range(1, failures + 1):
        total += per_repair * discount_factor(interest_rate, n / group_rate)
    return total


def repair_count(choice: HardwareChoice, node_count: int, horizon_years: float) -> int:
    """Number of repairs the periodic failure model predicts over the horizon."""
    group_rate = node_count * per_hour_to_per_year(choice.failure_rate_per_hour)
    return guarded_floor(horizon_years * group_rate)


def best_choice(
    choices,
    node_count: int,
    horizon_years: float,
    interest_rate: float,
    repair_cost: float,
) -> tuple[HardwareChoice, float]:
    """The choice minimizing hardware plus discounted repairs.

    Exact cost ties break toward the lower per-location cost, then the
    lower id.
    """
    options = list(choices)
    if not options:
        raise ValueError("at least one hardware choice is required")
    best: tuple[float, float, str, HardwareChoice] | None = None
    for choice in options:
        total = choice_cost(choice, node_count, horizon_years, interest_rate, repair_cost)
        key = (total, choice.cost, choice.id, choice)
        if best is None or key[:3] < best[:3]:
            best = key
    assert best is not None
    return best[3], best[0]


def scaled_product_consistent(choice: HardwareChoice, base: HardwareChoice, rel_tol: float = 1e-12) -> bool:
    """Whether a redundancy-derived choice preserves the cost-rate product."""
    return math.isclose(
        choice.cost * choice.failure_rate_per_hour,
        base.cost * base.failure_rate_per_hour,
        rel_tol=rel_tol,
    )
