"""Unit conventions shared across the package.

Money is in abstract financial units ($). Scheduling quantities (interest
rate, operational lifetime, visit lifetimes, MTBF) are in years; energy math
runs in SI seconds. One declared conversion is used everywhere:
1 year = 365 days = 31,536,000 s = 8,760 h.
"""

import math

SECONDS_PER_YEAR = 31_536_000.0
HOURS_PER_YEAR = 8_760.0

MILLIWATT = 1e-3


def dbm_to_watts(dbm: float) -> float:
    """Convert a power level in dBm to Watts."""
    return MILLIWATT * 10.0 ** (dbm / 10.0)


def watts_to_dbm(watts: float) -> float:
    """Convert a power level in Watts to dBm."""
    if watts <= 0.0:
        raise ValueError("power must be positive to express in dBm")
    return 10.0 * math.log10(watts / MILLIWATT)


def per_hour_to_per_year(rate_per_hour: float) -> float:
    """Convert a failure rate from failures/hour to failures/year."""
    return rate_per_hour * HOURS_PER_YEAR


def guarded_floor(value: float, rel_eps: float = 1e-12) -> int:
    """Floor with a small relative epsilon applied first.

    Protects counts like floor(L / mtbf) from losing an event to
    floating-point when the ratio is an exact integer in real arithmetic.
    """
    if value < 0.0:
        raise ValueError("guarded_floor expects a non-negative value")
    if math.isinf(value):
        raise ValueError("guarded_floor expects a finite value")
    return int(math.floor(value * (1.0 + rel_eps)))
