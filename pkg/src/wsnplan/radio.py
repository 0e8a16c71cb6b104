"""Per-link energy accounting: link budget, level selection, link construction.

The link budget follows the far-field path loss model: the signal power
required at the transmitter grows as distance^gamma from the receiver
sensitivity. Transmit settings are discrete, so each link carries the
smallest table level that closes the budget.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

from .errors import InfeasibleError, ScenarioError
from .scenario import RadioModel, Scenario, SINK


@dataclass(frozen=True)
class Link:
    """A feasible directed radio edge with its per-bit energy costs."""

    from_id: str
    to_id: str
    distance_m: float
    tx_energy_j_per_bit: float
    rx_energy_j_per_bit: float
    tx_level: int


def friis_required_power(distance_m: float, radio: RadioModel) -> float:
    """Transmit signal power in W needed to reach the receiver sensitivity.

    Distances inside the near field are clamped to the near-field boundary;
    the far-field model is not meaningful below it.
    """
    d0 = radio.near_field_distance_m
    d = max(distance_m, d0)
    gain_product = radio.antenna_gain * radio.antenna_gain
    constant = radio.rx_sensitivity_w * (4.0 * math.pi * d0) ** 2 / (
        gain_product * radio.wavelength_m**2
    )
    required = constant * (d / d0) ** radio.path_loss_exponent
    if not math.isfinite(required):
        raise ScenarioError(
            f"link budget for d={distance_m} m is not finite; check the radio model"
        )
    return required


def select_tx_level(required_w: float, radio: RadioModel) -> int:
    """Index of the smallest transmit level whose signal power covers ``required_w``."""
    for level, (signal_power, _current) in enumerate(radio.tx_power_table):
        if signal_power >= required_w:
            return level
    raise InfeasibleError("link infeasible at any power level")


def max_link_distance(radio: RadioModel) -> float:
    """Largest distance the strongest transmit level can cover."""
    top_power = radio.tx_power_table[-1][0]
    d0 = radio.near_field_distance_m
    base = friis_required_power(d0, radio)
    if top_power < base:
        return 0.0
    return d0 * (top_power / base) ** (1.0 / radio.path_loss_exponent)


def build_links(scenario: Scenario) -> list[Link]:
    """All feasible directed links between location pairs.

    Sinks only receive, so they have no outgoing links. Pairs whose budget
    cannot be closed at any transmit level are simply absent.
    """
    radio = scenario.radio
    rx_energy = radio.rx_energy_j_per_bit
    links: list[Link] = []
    for src in scenario.locations:
        if src.kind == SINK:
            continue
        for dst in scenario.locations:
            if dst.id == src.id:
                continue
            distance = math.dist(src.position, dst.position)
            required = friis_required_power(distance, radio)
            try:
                level = select_tx_level(required, radio)
            except InfeasibleError:
                continue
            links.append(
                Link(
                    from_id=src.id,
                    to_id=dst.id,
                    distance_m=distance,
                    tx_energy_j_per_bit=radio.tx_energy_j_per_bit(level),
                    rx_energy_j_per_bit=rx_energy,
                    tx_level=level,
                )
            )
    return links


def default_tx_power_table() -> tuple[tuple[float, float], ...]:
    """The bundled 16-level transmit table (signal power W, current A).

    Reconstructed from public low-power 802.15.4 transceiver figures by
    quadratic interpolation of current draw over the documented output power
    steps; it is configuration, not a measurement, and every entry point that
    consumes a radio model accepts an override.
    """
    payload = json.loads(
        resources.files("wsnplan.data").joinpath("rf230_tx_table.json").read_text()
    )
    return tuple((float(p), float(c)) for p, c in payload["levels"])
