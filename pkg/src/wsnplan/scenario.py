"""Domain types for a planning scenario and their invariant checks.

A scenario bundles the physical network description (locations, radio),
and the economic parameters driving deployment and maintenance budgeting.
All types are immutable after construction and safe to share between
concurrent evaluations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

SENSOR = "sensor"
SINK = "sink"
RELAY = "candidate-relay"
LOCATION_KINDS = (SENSOR, SINK, RELAY)


@dataclass(frozen=True)
class Location:
    """A point in the monitored area that may carry a node.

    Sensors generate data at ``data_rate_bps`` and spend
    ``sense_energy_j_per_bit`` acquiring it; relays and sinks generate
    nothing. Positions are planar coordinates in meters.
    """

    id: str
    kind: str
    position: tuple[float, float]
    data_rate_bps: float = 0.0
    sense_energy_j_per_bit: float = 0.0


@dataclass(frozen=True)
class RadioModel:
    """Transceiver parameters used for per-link energy accounting.

    ``tx_power_table`` lists the discrete transmit settings as
    (radiated signal power in W, supply current draw in A) pairs, ordered by
    strictly increasing signal power. Receive-side behaviour is captured by a
    single current draw and the receiver sensitivity used in the link budget.
    """

    supply_voltage_v: float
    bitrate_bps: float
    rx_current_a: float
    tx_power_table: tuple[tuple[float, float], ...]
    rx_sensitivity_w: float
    antenna_gain: float
    wavelength_m: float
    path_loss_exponent: float
    near_field_distance_m: float

    @property
    def rx_energy_j_per_bit(self) -> float:
        """Energy spent receiving one bit; identical for every link."""
        return self.supply_voltage_v * self.rx_current_a / self.bitrate_bps

    def tx_energy_j_per_bit(self, level: int) -> float:
        """Energy spent transmitting one bit at a given table level."""
        return self.supply_voltage_v * self.tx_power_table[level][1] / self.bitrate_bps


@dataclass(frozen=True)
class EconomicParams:
    """Costs, rates and horizons for the budgeting layer.

    ``labor_cost_per_visit`` is stored as one value per potential visit
    (length ``max_visits``); passing a scalar broadcasts it. Failure rates
    are ingested in failures/hour to match datasheet conventions and are
    converted to per-year values where the math needs them.
    """

    node_cost: float
    energy_cost_per_joule: float
    interest_rate: float
    operational_lifetime_years: float
    repair_cost: float
    failure_rate_per_hour: float
    max_visits: int
    labor_cost_per_visit: tuple[float, ...] = field(default=())
    max_visit_expenditure: tuple[float, ...] = field(default=())

    @staticmethod
    def create(
        node_cost: float,
        energy_cost_per_joule: float,
        labor_cost_per_visit: float | tuple[float, ...] | list[float],
        interest_rate: float,
        operational_lifetime_years: float,
        repair_cost: float,
        failure_rate_per_hour: float,
        max_visits: int,
        max_visit_expenditure: float | tuple[float, ...] | list[float] | None = None,
    ) -> "EconomicParams":
        """Build params, broadcasting scalar labor costs and payment caps."""
        labor = _broadcast(labor_cost_per_visit, max_visits)
        if max_visit_expenditure is None:
            caps = tuple(math.inf for _ in range(max_visits))
        else:
            caps = _broadcast(max_visit_expenditure, max_visits)
        return EconomicParams(
            node_cost=node_cost,
            energy_cost_per_joule=energy_cost_per_joule,
            interest_rate=interest_rate,
            operational_lifetime_years=operational_lifetime_years,
            repair_cost=repair_cost,
            failure_rate_per_hour=failure_rate_per_hour,
            max_visits=max_visits,
            labor_cost_per_visit=labor,
            max_visit_expenditure=caps,
        )

    def labor_cost(self, visit: int) -> float:
        """Labor cost of 1-based visit number ``visit``."""
        return self.labor_cost_per_visit[visit - 1]


def _broadcast(value, count: int) -> tuple[float, ...]:
    if isinstance(value, (int, float)):
        return tuple(float(value) for _ in range(count))
    values = tuple(float(x) for x in value)
    if len(values) == 1:
        return tuple(values[0] for _ in range(count))
    if len(values) != count:
        raise ValueError(f"expected 1 or {count} per-visit values, got {len(values)}")
    return values


@dataclass(frozen=True)
class Scenario:
    """Immutable description of locations, radio model, and economics."""

    locations: tuple[Location, ...]
    radio: RadioModel
    econ: EconomicParams

    def sensors(self) -> tuple[Location, ...]:
        return tuple(loc for loc in self.locations if loc.kind == SENSOR)

    def sinks(self) -> tuple[Location, ...]:
        return tuple(loc for loc in self.locations if loc.kind == SINK)

    def relays(self) -> tuple[Location, ...]:
        return tuple(loc for loc in self.locations if loc.kind == RELAY)

    def location(self, loc_id: str) -> Location:
        for loc in self.locations:
            if loc.id == loc_id:
                return loc
        raise KeyError(loc_id)


def validate_scenario(scenario: Scenario) -> list[str]:
    """Check every scenario invariant; return a list of violation messages.

    Pure and idempotent: violations are data, not failures. An empty list
    means every downstream operation's shape preconditions hold.
    """
    violations: list[str] = []
    violations.extend(_validate_locations(scenario.locations))
    violations.extend(_validate_radio(scenario.radio))
    violations.extend(validate_economics(scenario.econ))
    return violations


def _validate_locations(locations: tuple[Location, ...]) -> list[str]:
    out: list[str] = []
    seen_ids: set[str] = set()
    seen_positions: dict[tuple[float, float], str] = {}
    n_sensors = 0
    n_sinks = 0
    for loc in locations:
        if loc.id in seen_ids:
            out.append(f"duplicate location id {loc.id!r}")
        seen_ids.add(loc.id)
        if loc.kind not in LOCATION_KINDS:
            out.append(f"location {loc.id!r}: unknown kind {loc.kind!r}")
            continue
        if not all(math.isfinite(c) for c in loc.position):
            out.append(f"location {loc.id!r}: position must be finite")
        else:
            prior = seen_positions.get(loc.position)
            if prior is not None:
                out.append(
                    f"location {loc.id!r}: shares coordinates with {prior!r}"
                )
            seen_positions[loc.position] = loc.id
        if loc.kind == SENSOR:
            n_sensors += 1
            if not loc.data_rate_bps > 0:
                out.append(f"sensor {loc.id!r}: data_rate_bps must be > 0")
            if loc.sense_energy_j_per_bit < 0:
                out.append(f"sensor {loc.id!r}: sense_energy_j_per_bit must be >= 0")
        else:
            if loc.kind == SINK:
                n_sinks += 1
            if loc.data_rate_bps != 0:
                out.append(f"location {loc.id!r}: data_rate_bps must be 0 for {loc.kind}")
    if n_sensors == 0:
        out.append("no sensor locations")
    if n_sinks == 0:
        out.append("no sink locations")
    return out


def _validate_radio(radio: RadioModel) -> list[str]:
    out: list[str] = []
    if not radio.tx_power_table:
        out.append("tx_power_table must be non-empty")
    else:
        powers = [p for p, _ in radio.tx_power_table]
        if any(b <= a for a, b in zip(powers, powers[1:])):
            out.append("tx_power_table must be strictly increasing in signal power")
        if any(p <= 0 or current < 0 for p, current in radio.tx_power_table):
            out.append("tx_power_table entries must have positive power and non-negative current")
    if not radio.rx_sensitivity_w > 0:
        out.append("rx_sensitivity_w must be > 0")
    if radio.path_loss_exponent < 2:
        out.append("path_loss_exponent must be >= 2")
    if not radio.near_field_distance_m > 0:
        out.append("near_field_distance_m must be > 0")
    if not radio.bitrate_bps > 0:
        out.append("bitrate_bps must be > 0")
    if not radio.supply_voltage_v > 0:
        out.append("supply_voltage_v must be > 0")
    if radio.rx_current_a < 0:
        out.append("rx_current_a must be >= 0")
    if not radio.antenna_gain > 0:
        out.append("antenna_gain must be > 0")
    if not radio.wavelength_m > 0:
        out.append("wavelength_m must be > 0")
    return out


def validate_economics(econ: EconomicParams) -> list[str]:
    """Economic-parameter invariant checks, also used for topology-free documents."""
    out: list[str] = []
    if not econ.interest_rate > 0:
        out.append("interest_rate must be > 0")
    if not econ.operational_lifetime_years > 0:
        out.append("operational_lifetime_years must be > 0")
    if econ.max_visits < 1:
        out.append("max_visits must be >= 1")
    for name, value in (
        ("node_cost", econ.node_cost),
        ("energy_cost_per_joule", econ.energy_cost_per_joule),
        ("repair_cost", econ.repair_cost),
    ):
        if value < 0:
            out.append(f"{name} must be >= 0")
    if econ.failure_rate_per_hour < 0:
        out.append("failure_rate_per_hour must be >= 0")
    if len(econ.labor_cost_per_visit) != econ.max_visits:
        out.append("labor_cost_per_visit must have one entry per potential visit")
    elif any(w < 0 for w in econ.labor_cost_per_visit):
        out.append("labor_cost_per_visit entries must be >= 0")
    if len(econ.max_visit_expenditure) != econ.max_visits:
        out.append("max_visit_expenditure must have one entry per potential visit")
    elif any(cap <= 0 for cap in econ.max_visit_expenditure):
        out.append("max_visit_expenditure entries must be > 0")
    return out
