"""Independent reference implementations used to cross-check the package.

Everything here is written the obvious, slow way: literal power operators
for discounting, exhaustive path enumeration for routing, term-by-term sums
for repair streams, and finite differences for curvature. None of it shares
code with the production paths it checks.
"""

from __future__ import annotations

import itertools
import math

from wsnplan import Location, Scenario
from wsnplan.scenario import SENSOR, SINK

HOURS_PER_YEAR = 8760.0


def literal_npc(payments, lifetimes, rate) -> float:
    """Direct evaluation of the discounted visit sum with the ** operator."""
    total = payments[0]
    elapsed = 0.0
    for payment, lifetime in zip(payments[1:], lifetimes[:-1]):
        elapsed += lifetime
        total += payment / (1.0 + rate) ** elapsed
    return total


def literal_failure_npc(repair_cost, mtbf_years, horizon_years, rate) -> float:
    """Periodic repair stream summed term by term."""
    if math.isinf(mtbf_years):
        return 0.0
    count = int(math.floor(horizon_years / mtbf_years * (1.0 + 1e-12)))
    return sum(
        repair_cost / (1.0 + rate) ** (n * mtbf_years) for n in range(1, count + 1)
    )


def literal_choice_cost(cost, rate_per_hour, node_count, horizon_years, interest, repair) -> float:
    """Hardware plus discounted repairs, straight off the formula."""
    lam_year = rate_per_hour * HOURS_PER_YEAR
    group = node_count * lam_year
    failures = int(math.floor(horizon_years * group * (1.0 + 1e-12)))
    total = node_count * cost
    for n in range(1, failures + 1):
        total += (repair + cost) / (1.0 + interest) ** (n / group)
    return total


def enumerate_min_cost_paths(scenario: Scenario, links, open_ids):
    """Cheapest sensor-to-sink path by exhaustive simple-path enumeration.

    Returns {sensor_id: (cost, path)} with ties broken toward the
    lexicographically smaller id sequence; sensors with no path are absent.
    """
    adjacency: dict[str, list] = {}
    for link in links:
        if link.from_id in open_ids and link.to_id in open_ids:
            adjacency.setdefault(link.from_id, []).append(link)
    sink_ids = {loc.id for loc in scenario.sinks()}

    def explore(path, cost, best):
        node = path[-1]
        if node in sink_ids:
            key = (cost, tuple(path))
            return key if best is None or key < best else best
        for link in adjacency.get(node, ()):
            if link.to_id in path:
                continue
            best = explore(
                path + [link.to_id],
                cost + link.tx_energy_j_per_bit + link.rx_energy_j_per_bit,
                best,
            )
        return best

    result = {}
    for sensor in scenario.sensors():
        best = explore([sensor.id], 0.0, None)
        if best is not None:
            result[sensor.id] = (best[0], best[1])
    return result


def enumeration_network_power(scenario: Scenario, links, open_ids) -> float | None:
    """Total power from exhaustively enumerated cheapest paths; None if cut off."""
    paths = enumerate_min_cost_paths(scenario, links, open_ids)
    sensors = scenario.sensors()
    if len(paths) < len(sensors):
        return None
    total = 0.0
    for sensor in sensors:
        cost, _ = paths[sensor.id]
        total += sensor.data_rate_bps * cost
        total += sensor.sense_energy_j_per_bit * sensor.data_rate_bps
    return total


def floyd_warshall_network_power(scenario: Scenario, links, open_ids) -> float | None:
    """Routing oracle via all-pairs shortest costs; None if a sensor is cut off.

    A different algorithm family from the production per-source search, and
    cheap enough for exhaustive relay-subset sweeps.
    """
    nodes = sorted(open_ids)
    index = {node: i for i, node in enumerate(nodes)}
    n = len(nodes)
    dist = [[math.inf] * n for _ in range(n)]
    for i in range(n):
        dist[i][i] = 0.0
    for link in links:
        if link.from_id in index and link.to_id in index:
            weight = link.tx_energy_j_per_bit + link.rx_energy_j_per_bit
            i, j = index[link.from_id], index[link.to_id]
            dist[i][j] = min(dist[i][j], weight)
    for k in range(n):
        dk = dist[k]
        for i in range(n):
            dik = dist[i][k]
            if math.isinf(dik):
                continue
            row = dist[i]
            for j in range(n):
                alt = dik + dk[j]
                if alt < row[j]:
                    row[j] = alt
    sink_idx = [index[loc.id] for loc in scenario.sinks() if loc.id in index]
    total = 0.0
    for sensor in scenario.sensors():
        best = min(dist[index[sensor.id]][j] for j in sink_idx)
        if math.isinf(best):
            return None
        total += sensor.data_rate_bps * best
        total += sensor.sense_energy_j_per_bit * sensor.data_rate_bps
    return total


def hessian_fd(func, point, step) -> list[list[float]]:
    """Central finite-difference Hessian of a scalar function of a vector."""
    n = len(point)
    h = [[0.0] * n for _ in range(n)]
    base = list(point)

    def at(offsets):
        x = list(base)
        for idx, delta in offsets.items():
            x[idx] += delta
        return func(x)

    for i in range(n):
        fpp = at({i: step})
        fmm = at({i: -step})
        h[i][i] = (fpp - 2.0 * func(base) + fmm) / step**2
        for j in range(i + 1, n):
            pp = at({i: step, j: step})
            pm = at({i: step, j: -step})
            mp = at({i: -step, j: step})
            mm = at({i: -step, j: -step})
            h[i][j] = h[j][i] = (pp - pm - mp + mm) / (4.0 * step**2)
    return h


def grid_line(start, stop, step):
    values = []
    x = start
    while x <= stop + 0.5 * step:
        values.append(x)
        x += step
    return values


def random_topology(rng, radio, econ, n_sensors=None, n_relays=None) -> Scenario:
    """A seeded random instance: one sink, sensors spread wide, relays to bridge."""
    n_sensors = n_sensors if n_sensors is not None else rng.randint(2, 5)
    n_relays = n_relays if n_relays is not None else rng.randint(3, 9)
    locations = [Location(id="sink", kind=SINK, position=(0.0, 0.0))]
    for i in range(n_sensors):
        locations.append(
            Location(
                id=f"s{i}",
                kind=SENSOR,
                position=(rng.uniform(-90.0, 90.0), rng.uniform(-90.0, 90.0)),
                data_rate_bps=rng.uniform(0.1, 2.0),
                sense_energy_j_per_bit=rng.uniform(0.0, 0.7),
            )
        )
    for i in range(n_relays):
        locations.append(
            Location(
                id=f"r{i}",
                kind="candidate-relay",
                position=(rng.uniform(-90.0, 90.0), rng.uniform(-90.0, 90.0)),
            )
        )
    return Scenario(locations=tuple(locations), radio=radio, econ=econ)


def all_relay_subsets(scenario: Scenario):
    relay_ids = sorted(loc.id for loc in scenario.relays())
    for size in range(len(relay_ids) + 1):
        yield from itertools.combinations(relay_ids, size)
