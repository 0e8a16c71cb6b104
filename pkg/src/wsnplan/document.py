"""Scenario document ingestion: JSON parsing, schema validation, construction.

A document either carries a full topology (locations + radio) for the
deployment layer, or bypasses it with a fixed network-power override; the
scheduling layer only needs the power draw and node count.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema

from .errors import ScenarioError
from .radio import default_tx_power_table
from .reliability import HardwareChoice, redundancy_sweep
from .scenario import (
    EconomicParams,
    Location,
    RadioModel,
    Scenario,
    validate_economics,
    validate_scenario,
)
from .units import dbm_to_watts

ALL_ANALYSES = ("lifetime", "schedule", "reliability")


@dataclass(frozen=True)
class Overrides:
    network_power_watts: float | None = None
    node_count: int | None = None
    mtbf_years: float | None = None


@dataclass(frozen=True)
class ScenarioDocument:
    """Parsed and schema-validated planning input."""

    name: str
    econ: EconomicParams
    scenario: Scenario | None
    overrides: Overrides
    hardware_choices: tuple[HardwareChoice, ...]
    run: tuple[str, ...]

    @property
    def has_topology(self) -> bool:
        return self.scenario is not None


def _schema() -> dict:
    return json.loads(
        resources.files("wsnplan.data").joinpath("scenario.schema.json").read_text()
    )


def load_document(source: str | Path | dict) -> ScenarioDocument:
    """Load a scenario document from a path or an already-parsed mapping.

    Schema violations raise a validation error naming the offending path.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    else:
        payload = source
    try:
        jsonschema.validate(payload, _schema())
    except jsonschema.ValidationError as exc:
        raise ScenarioError(f"schema: {exc.json_path}: {exc.message}") from exc

    econ_raw = payload["economics"]
    econ = EconomicParams.create(
        node_cost=econ_raw["node_cost"],
        energy_cost_per_joule=econ_raw["energy_cost_per_joule"],
        labor_cost_per_visit=econ_raw["labor_cost_per_visit"],
        interest_rate=econ_raw["interest_rate"],
        operational_lifetime_years=econ_raw["operational_lifetime_years"],
        repair_cost=econ_raw["repair_cost"],
        failure_rate_per_hour=econ_raw["failure_rate_per_hour"],
        max_visits=econ_raw["max_visits"],
        max_visit_expenditure=econ_raw.get("max_visit_expenditure"),
    )

    scenario = None
    if "locations" in payload or "radio" in payload:
        if "locations" not in payload or "radio" not in payload:
            raise ScenarioError("a topology needs both 'locations' and 'radio'")
        scenario = Scenario(
            locations=tuple(_parse_location(entry) for entry in payload["locations"]),
            radio=_parse_radio(payload["radio"]),
            econ=econ,
        )

    raw_overrides = payload.get("overrides", {})
    overrides = Overrides(
        network_power_watts=raw_overrides.get("network_power_watts"),
        node_count=raw_overrides.get("node_count"),
        mtbf_years=raw_overrides.get("mtbf_years"),
    )

    if scenario is None:
        if overrides.network_power_watts is None or overrides.node_count is None:
            raise ScenarioError(
                "document needs a topology or overrides.network_power_watts"
                " plus overrides.node_count"
            )

    hardware = _parse_hardware(payload.get("hardware_choices"))
    run = tuple(payload.get("run", ALL_ANALYSES))
    return ScenarioDocument(
        name=payload.get("name", "unnamed"),
        econ=econ,
        scenario=scenario,
        overrides=overrides,
        hardware_choices=hardware,
        run=run,
    )


def validate_document(doc: ScenarioDocument) -> list[str]:
    """All invariant violations in a loaded document (empty means valid)."""
    if doc.scenario is not None:
        violations = validate_scenario(doc.scenario)
    else:
        violations = validate_economics(doc.econ)
    if "reliability" in doc.run and not doc.hardware_choices:
        violations.append("run requests 'reliability' but no hardware_choices given")
    return violations


def _parse_location(entry: dict) -> Location:
    return Location(
        id=entry["id"],
        kind=entry["kind"],
        position=(float(entry["position"][0]), float(entry["position"][1])),
        data_rate_bps=float(entry.get("data_rate_bps", 0.0)),
        sense_energy_j_per_bit=float(entry.get("sense_energy_j_per_bit", 0.0)),
    )


def _parse_radio(entry: dict) -> RadioModel:
    if "rx_sensitivity_w" in entry:
        sensitivity = float(entry["rx_sensitivity_w"])
    else:
        sensitivity = dbm_to_watts(float(entry["rx_sensitivity_dbm"]))
    table = entry.get("tx_power_table")
    if table is None:
        tx_table = default_tx_power_table()
    else:
        tx_table = tuple((float(p), float(c)) for p, c in table)
    return RadioModel(
        supply_voltage_v=float(entry["supply_voltage_v"]),
        bitrate_bps=float(entry["bitrate_bps"]),
        rx_current_a=float(entry["rx_current_a"]),
        tx_power_table=tx_table,
        rx_sensitivity_w=sensitivity,
        antenna_gain=float(entry["antenna_gain"]),
        wavelength_m=float(entry["wavelength_m"]),
        path_loss_exponent=float(entry["path_loss_exponent"]),
        near_field_distance_m=float(entry["near_field_distance_m"]),
    )


def _parse_hardware(entry: dict | None) -> tuple[HardwareChoice, ...]:
    if entry is None:
        return ()
    if "options" in entry:
        return tuple(
            HardwareChoice(
                id=opt["id"],
                cost=float(opt["cost"]),
                failure_rate_per_hour=float(opt["failure_rate_per_hour"]),
            )
            for opt in entry["options"]
        )
    return redundancy_sweep(
        base_cost=float(entry["base_cost"]),
        base_failure_rate_per_hour=float(entry["base_failure_rate_per_hour"]),
        levels=entry["redundancy_levels"],
    )


def bundled_document_path(name: str) -> Path:
    """Filesystem path of a scenario document shipped with the package."""
    return Path(str(resources.files("wsnplan.data").joinpath(name)))


def load_default_document() -> ScenarioDocument:
    """The bundled gas-monitoring defaults with a fixed network power draw."""
    return load_document(bundled_document_path("default_scenario.json"))
