import math

import pytest
from hypothesis import given, strategies as st

from wsnplan.units import (
    dbm_to_watts,
    guarded_floor,
    per_hour_to_per_year,
    watts_to_dbm,
)


def test_dbm_conversion_reference_point():
    assert dbm_to_watts(0.0) == pytest.approx(1e-3)
    assert dbm_to_watts(-101.0) == pytest.approx(7.943282347242822e-14)


@given(st.floats(min_value=-150, max_value=60))
def test_dbm_round_trip(dbm):
    assert watts_to_dbm(dbm_to_watts(dbm)) == pytest.approx(dbm, abs=1e-9)


def test_rate_conversion():
    assert per_hour_to_per_year(1e-5) == pytest.approx(0.0876)


def test_guarded_floor_recovers_exact_integer_ratios():
    # 10 / (1/3) / 30 == 1 only in real arithmetic
    value = (10.0 / (1.0 / 3.0)) / 3.0
    assert guarded_floor(value) == 10
    assert guarded_floor(9.99) == 9
    assert guarded_floor(0.0) == 0


@given(st.integers(min_value=0, max_value=10**6))
def test_guarded_floor_integers_stay_fixed(n):
    assert guarded_floor(float(n)) == n


def test_guarded_floor_rejects_bad_input():
    with pytest.raises(ValueError):
        guarded_floor(-1.0)
    with pytest.raises(ValueError):
        guarded_floor(math.inf)
