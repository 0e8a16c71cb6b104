"""Visit-lifetime maximization: relay selection, routing, and the lifetime function.

For a given visit expenditure the deployment layer chooses which candidate
relay locations to open and how to route every sensor's data so that the
budget left after hardware and labor buys the longest running time. With
linear per-bit energy costs and no capacities, the optimal flow for a fixed
node set routes each sensor along its minimum-energy-per-bit path to the
cheapest reachable sink, which lets a branch-and-bound over relay subsets
solve the joint problem exactly.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field

from .errors import InfeasibleError, ScenarioError
from .radio import Link, build_links
from .scenario import EconomicParams, RELAY, Scenario, SENSOR, SINK
from .units import HOURS_PER_YEAR, SECONDS_PER_YEAR


@dataclass(frozen=True)
class DeploymentPlan:
    """A chosen node set with optimal flows and the resulting power draw.

    ``flows_bps`` maps directed edges (from_id, to_id) to data rates;
    ``node_power_w`` is the per-location draw including sensing and the
    receive cost at sinks; ``network_power_w`` is their sum.
    """

    open_ids: tuple[str, ...]
    open_relay_ids: tuple[str, ...]
    flows_bps: dict[tuple[str, str], float]
    node_power_w: dict[str, float]
    network_power_w: float
    hardware_cost: float
    node_count: int
    sensor_paths: dict[str, tuple[str, ...]] = field(default_factory=dict)


@dataclass(frozen=True)
class LifetimeFunction:
    """Piecewise-linear map from a visit expenditure to its lifetime in years.

    Below the per-visit threshold the lifetime is zero (the money is eaten
    by hardware and labor); above it the lifetime grows with a slope set by
    the network's energy bill per year.
    """

    slope_years_per_dollar: float
    intercepts_years: tuple[float, ...]

    def __post_init__(self):
        if not self.slope_years_per_dollar > 0:
            raise ScenarioError("lifetime slope must be > 0")
        if any(b > 0 for b in self.intercepts_years):
            raise ScenarioError("lifetime intercepts must be <= 0")
        if not self.intercepts_years:
            raise ScenarioError("at least one visit intercept is required")

    @property
    def max_visits(self) -> int:
        return len(self.intercepts_years)

    def intercept(self, visit: int) -> float:
        """Intercept in years for 1-based visit number ``visit``."""
        return self.intercepts_years[visit - 1]

    def threshold(self, visit: int) -> float:
        """Smallest expenditure with non-zero lifetime for ``visit``."""
        return -self.intercept(visit) / self.slope_years_per_dollar

    def lifetime(self, visit: int, payment: float) -> float:
        """Visit lifetime in years for an expenditure, clamped at zero."""
        value = self.slope_years_per_dollar * payment + self.intercept(visit)
        return value if value > 0.0 else 0.0

    def payment_for_lifetime(self, visit: int, lifetime_years: float) -> float:
        """Expenditure whose linear-branch lifetime equals ``lifetime_years``."""
        return (lifetime_years - self.intercept(visit)) / self.slope_years_per_dollar


def min_power_routing(
    scenario: Scenario,
    open_ids: set[str] | frozenset[str],
    links: list[Link] | None = None,
) -> tuple[dict[tuple[str, str], float], float, dict[str, float], dict[str, tuple[str, ...]]]:
    """Route every sensor to its cheapest reachable sink through open nodes.

    Returns (flows in bits/s, total network power in W, per-node power in W,
    per-sensor path). Edge weight is transmit energy at the source plus
    receive energy at the destination, per bit; ties between equal-cost paths
    break toward the lexicographically smaller id sequence.
    """
    if links is None:
        links = build_links(scenario)
    adjacency: dict[str, list[Link]] = {}
    for link in links:
        if link.from_id in open_ids and link.to_id in open_ids:
            adjacency.setdefault(link.from_id, []).append(link)
    for neighbours in adjacency.values():
        neighbours.sort(key=lambda l: l.to_id)

    sink_ids = {loc.id for loc in scenario.sinks()}
    link_by_edge = {(l.from_id, l.to_id): l for l in links}

    flows: dict[tuple[str, str], float] = {}
    paths: dict[str, tuple[str, ...]] = {}
    for sensor in scenario.sensors():
        path = _cheapest_sink_path(sensor.id, adjacency, sink_ids)
        if path is None:
            raise InfeasibleError(
                f"sensor {sensor.id!r} cannot reach any sink through open nodes"
            )
        paths[sensor.id] = path
        for a, b in zip(path, path[1:]):
            flows[(a, b)] = flows.get((a, b), 0.0) + sensor.data_rate_bps

    node_power: dict[str, float] = {loc_id: 0.0 for loc_id in open_ids}
    for sensor in scenario.sensors():
        node_power[sensor.id] += sensor.sense_energy_j_per_bit * sensor.data_rate_bps
    for (a, b), rate in flows.items():
        link = link_by_edge[(a, b)]
        node_power[a] += link.tx_energy_j_per_bit * rate
        node_power[b] += link.rx_energy_j_per_bit * rate
    total_power = sum(node_power.values())
    # keep flows deterministic for downstream serialization
    flows = dict(sorted(flows.items()))
    return flows, total_power, node_power, paths


def _cheapest_sink_path(
    source: str,
    adjacency: dict[str, list[Link]],
    sink_ids: set[str],
) -> tuple[str, ...] | None:
    """Dijkstra from one source; the heap orders by (cost, id-sequence)."""
    heap: list[tuple[float, tuple[str, ...]]] = [(0.0, (source,))]
    settled: dict[str, tuple[float, tuple[str, ...]]] = {}
    while heap:
        cost, path = heapq.heappop(heap)
        node = path[-1]
        if node in settled:
            continue
        settled[node] = (cost, path)
        if node in sink_ids:
            continue  # sinks only receive
        for link in adjacency.get(node, ()):
            if link.to_id in settled:
                continue
            weight = link.tx_energy_j_per_bit + link.rx_energy_j_per_bit
            heapq.heappush(heap, (cost + weight, path + (link.to_id,)))
    best: tuple[float, tuple[str, ...]] | None = None
    for sink in sink_ids:
        if sink in settled:
            candidate = settled[sink]
            if best is None or candidate < best:
                best = candidate
    return best[1] if best is not None else None


def _plan_for_subset(
    scenario: Scenario,
    relay_subset: tuple[str, ...],
    links: list[Link],
) -> DeploymentPlan:
    fixed = [loc.id for loc in scenario.locations if loc.kind != RELAY]
    open_ids = frozenset(fixed) | frozenset(relay_subset)
    flows, rho, node_power, paths = min_power_routing(scenario, open_ids, links)
    node_count = len(fixed) + len(relay_subset)
    return DeploymentPlan(
        open_ids=tuple(sorted(open_ids)),
        open_relay_ids=tuple(sorted(relay_subset)),
        flows_bps=flows,
        node_power_w=node_power,
        network_power_w=rho,
        hardware_cost=scenario.econ.node_cost * node_count,
        node_count=node_count,
        sensor_paths=paths,
    )


def _lifetime_years(payment: float, hardware: float, labor: float, rho: float, alpha: float) -> float:
    surplus = payment - hardware - labor
    if surplus <= 0.0 or rho <= 0.0:
        return 0.0
    return surplus / (alpha * rho) / SECONDS_PER_YEAR


def _relay_branching_order(scenario: Scenario, links: list[Link]) -> list[str]:
    """Relays ordered most-used-first on the all-open minimum-energy paths."""
    relay_ids = [loc.id for loc in scenario.relays()]
    all_open = frozenset(loc.id for loc in scenario.locations)
    _, _, _, paths = min_power_routing(scenario, all_open, links)
    usage = {rid: 0 for rid in relay_ids}
    for path in paths.values():
        for node in path[1:-1]:
            if node in usage:
                usage[node] += 1
    return sorted(relay_ids, key=lambda rid: (-usage[rid], rid))


def maximize_visit_lifetime(
    scenario: Scenario,
    visit: int,
    payment: float,
    plan: DeploymentPlan | None = None,
    links: list[Link] | None = None,
) -> tuple[float, DeploymentPlan]:
    """Longest achievable visit lifetime in years for a given expenditure.

    The initial visit jointly picks the relay subset and routing by
    branch-and-bound; later visits reuse the initial plan (the node set is
    fixed after deployment) and simply convert the energy surplus to time.
    A payment that cannot cover hardware plus labor yields zero lifetime,
    not an error.
    """
    if payment < 0:
        raise ValueError("payment must be >= 0")
    econ = scenario.econ
    labor = econ.labor_cost(visit)
    if visit >= 2:
        if plan is None:
            raise ValueError("visits after the first require the initial deployment plan")
        lifetime = _lifetime_years(
            payment, 0.0, labor, plan.network_power_w, econ.energy_cost_per_joule
        )
        return lifetime, plan

    if links is None:
        links = build_links(scenario)
    order = _relay_branching_order(scenario, links)  # raises if even all-open is infeasible
    alpha = econ.energy_cost_per_joule
    fixed_count = sum(1 for loc in scenario.locations if loc.kind != RELAY)

    rho_cache: dict[frozenset[str], float | None] = {}

    def rho_for(subset: frozenset[str]) -> float | None:
        if subset not in rho_cache:
            try:
                _, rho, _, _ = min_power_routing(
                    scenario, subset | _fixed_ids(scenario), links
                )
            except InfeasibleError:
                rho_cache[subset] = None
            else:
                rho_cache[subset] = rho
        return rho_cache[subset]

    best_lifetime = -1.0
    best_subset: tuple[str, ...] | None = None

    def consider(subset: tuple[str, ...]) -> None:
        nonlocal best_lifetime, best_subset
        rho = rho_for(frozenset(subset))
        if rho is None:
            return
        hardware = econ.node_cost * (fixed_count + len(subset))
        lifetime = _lifetime_years(payment, hardware, labor, rho, alpha)
        if lifetime > best_lifetime:
            best_lifetime = lifetime
            best_subset = subset

    # cheap incumbents before the search: no relays, then everything open
    consider(())
    consider(tuple(order))

    def descend(committed: tuple[str, ...], index: int) -> None:
        nonlocal best_lifetime, best_subset
        remaining = order[index:]
        rho_lb = rho_for(frozenset(committed) | frozenset(remaining))
        if rho_lb is None:
            return  # no completion can connect every sensor
        hardware_lb = econ.node_cost * (fixed_count + len(committed))
        bound = _lifetime_years(payment, hardware_lb, labor, rho_lb, alpha)
        if bound <= best_lifetime:
            return
        if not remaining:
            consider(committed)
            return
        nxt = order[index]
        descend(committed + (nxt,), index + 1)
        descend(committed, index + 1)

    descend((), 0)
    if best_subset is None:
        raise InfeasibleError("no relay subset connects every sensor to a sink")
    chosen = _plan_for_subset(scenario, best_subset, links)
    return best_lifetime, chosen


def minimum_horizon_deployment(
    scenario: Scenario,
    horizon_years: float,
    links: list[Link] | None = None,
) -> tuple[float, DeploymentPlan]:
    """Cheapest single-visit expenditure that keeps the network up for the horizon.

    Branch-and-bound over relay subsets minimizing hardware plus the energy
    bill for ``horizon_years``, plus the first visit's labor. The returned
    plan is the deployment the maintenance schedule is built on, and the
    returned expenditure is the single-visit benchmark budget.
    """
    if links is None:
        links = build_links(scenario)
    order = _relay_branching_order(scenario, links)
    econ = scenario.econ
    labor = econ.labor_cost(1)
    horizon_seconds = horizon_years * SECONDS_PER_YEAR
    fixed_count = sum(1 for loc in scenario.locations if loc.kind != RELAY)

    rho_cache: dict[frozenset[str], float | None] = {}

    def rho_for(subset: frozenset[str]) -> float | None:
        if subset not in rho_cache:
            try:
                _, rho, _, _ = min_power_routing(
                    scenario, subset | _fixed_ids(scenario), links
                )
            except InfeasibleError:
                rho_cache[subset] = None
            else:
                rho_cache[subset] = rho
        return rho_cache[subset]

    def cost_of(subset: tuple[str, ...], rho: float) -> float:
        hardware = econ.node_cost * (fixed_count + len(subset))
        return hardware + labor + econ.energy_cost_per_joule * rho * horizon_seconds

    best_cost = math.inf
    best_subset: tuple[str, ...] | None = None

    def consider(subset: tuple[str, ...]) -> None:
        nonlocal best_cost, best_subset
        rho = rho_for(frozenset(subset))
        if rho is None:
            return
        cost = cost_of(subset, rho)
        if cost < best_cost:
            best_cost = cost
            best_subset = subset

    consider(())
    consider(tuple(order))

    def descend(committed: tuple[str, ...], index: int) -> None:
        remaining = order[index:]
        rho_lb = rho_for(frozenset(committed) | frozenset(remaining))
        if rho_lb is None:
            return
        if cost_of(committed, rho_lb) >= best_cost:
            return
        if not remaining:
            consider(committed)
            return
        descend(committed + (order[index],), index + 1)
        descend(committed, index + 1)

    descend((), 0)
    if best_subset is None:
        raise InfeasibleError("no relay subset connects every sensor to a sink")
    return best_cost, _plan_for_subset(scenario, best_subset, links)


def enumerate_visit_lifetime(
    scenario: Scenario,
    payment: float,
    links: list[Link] | None = None,
) -> tuple[float, tuple[str, ...]]:
    """Exhaustive relay-subset search; exponential, intended as a cross-check."""
    if links is None:
        links = build_links(scenario)
    econ = scenario.econ
    labor = econ.labor_cost(1)
    alpha = econ.energy_cost_per_joule
    fixed_count = sum(1 for loc in scenario.locations if loc.kind != RELAY)
    relay_ids = sorted(loc.id for loc in scenario.relays())
    best: tuple[float, tuple[str, ...]] | None = None
    for size in range(len(relay_ids) + 1):
        for subset in itertools.combinations(relay_ids, size):
            try:
                _, rho, _, _ = min_power_routing(
                    scenario, frozenset(subset) | _fixed_ids(scenario), links
                )
            except InfeasibleError:
                continue
            hardware = econ.node_cost * (fixed_count + size)
            lifetime = _lifetime_years(payment, hardware, labor, rho, alpha)
            if best is None or lifetime > best[0]:
                best = (lifetime, subset)
    if best is None:
        raise InfeasibleError("no relay subset connects every sensor to a sink")
    return best


def _fixed_ids(scenario: Scenario) -> frozenset[str]:
    return frozenset(loc.id for loc in scenario.locations if loc.kind in (SENSOR, SINK))


def derive_lifetime_function(scenario: Scenario, plan: DeploymentPlan) -> LifetimeFunction:
    """Extract the expenditure-to-lifetime map implied by a solved deployment."""
    if plan.network_power_w <= 0.0:
        raise ScenarioError("network power is zero; lifetime function is degenerate")
    return lifetime_function_from_power(
        scenario.econ, plan.network_power_w, plan.node_count
    )


def lifetime_function_from_power(econ: EconomicParams, network_power_w: float, node_count: int) -> LifetimeFunction:
    """Lifetime function for a known network power draw and node count.

    Useful when the deployment layer is bypassed and the power draw is a
    scenario input rather than a routing result.
    """
    if network_power_w <= 0.0:
        raise ScenarioError("network power must be > 0")
    dollars_per_year = econ.energy_cost_per_joule * network_power_w * SECONDS_PER_YEAR
    slope = 1.0 / dollars_per_year
    hardware = econ.node_cost * node_count
    intercepts = []
    for visit in range(1, econ.max_visits + 1):
        fixed = econ.labor_cost(visit) + (hardware if visit == 1 else 0.0)
        intercepts.append(-fixed * slope)
    return LifetimeFunction(slope_years_per_dollar=slope, intercepts_years=tuple(intercepts))


def network_mtbf(node_count: int, failure_rate_per_hour: float) -> float:
    """Mean time between network failures in years.

    Under 1-connectivity any node failure is a network failure, so the
    network rate is the node rate times the node count. A zero failure rate
    yields +inf, meaning no unscheduled repairs.
    """
    if node_count < 1:
        raise ValueError("node_count must be >= 1")
    if failure_rate_per_hour < 0:
        raise ValueError("failure_rate_per_hour must be >= 0")
    if failure_rate_per_hour == 0.0:
        return math.inf
    failures_per_year = node_count * failure_rate_per_hour * HOURS_PER_YEAR
    return 1.0 / failures_per_year
