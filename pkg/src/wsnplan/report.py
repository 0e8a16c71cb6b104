"""End-to-end planning pipeline and machine-readable report emission.

The pipeline runs the deployment layer (unless a fixed network power
bypasses it), derives the lifetime function, optimizes the maintenance
schedule, prices hardware choices, and packs everything into tables that
serialize deterministically to JSON or CSV.
"""

from __future__ import annotations

import json
import math
from contextlib import contextmanager
from dataclasses import dataclass, field

from .document import ScenarioDocument, validate_document
from .errors import PlanningError, ScenarioError
from .lifetime import (
    LifetimeFunction,
    lifetime_function_from_power,
    minimum_horizon_deployment,
    network_mtbf,
)
from .npc import UnscheduledStream, npc, percent_savings
from .radio import build_links
from .reliability import best_choice, choice_cost, repair_count
from .scenario import EconomicParams
from .scheduling import (
    SchedulerResult,
    evl_schedule,
    optimal_number_of_visits,
)


@dataclass(frozen=True)
class FigureTable:
    """A column-named table of plain values, ready for CSV or JSON."""

    columns: tuple[str, ...]
    rows: tuple[tuple, ...] = ()


@dataclass
class Report:
    """Everything a pipeline run produced; recomputable from the document alone."""

    name: str
    deployment: dict | None = None
    lifetime_function: dict | None = None
    schedule_rows: list[dict] = field(default_factory=list)
    npc_summary: dict = field(default_factory=dict)
    reliability_rows: list[dict] = field(default_factory=list)
    figures: dict[str, FigureTable] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "deployment": self.deployment,
            "lifetime_function": self.lifetime_function,
            "schedule": self.schedule_rows,
            "npc_summary": self.npc_summary,
            "reliability": self.reliability_rows,
            "figures": {
                key: {"columns": list(tab.columns), "rows": [list(r) for r in tab.rows]}
                for key, tab in self.figures.items()
            },
        }


@contextmanager
def _stage(name: str):
    try:
        yield
    except PlanningError as exc:
        if exc.stage is None:
            exc.stage = name
        raise


def _resolve_power(doc: ScenarioDocument):
    """Network power, node count, and deployment details for the document.

    A fixed-power override wins over a topology; otherwise the deployment
    layer is solved for the operational horizon.
    """
    econ = doc.econ
    if doc.overrides.network_power_watts is not None:
        power = doc.overrides.network_power_watts
        count = doc.overrides.node_count
        if count is None:
            raise ScenarioError("a fixed network power needs overrides.node_count")
        return power, count, None
    with _stage("build-links"):
        links = build_links(doc.scenario)
    with _stage("deployment"):
        benchmark_payment, plan = minimum_horizon_deployment(
            doc.scenario, econ.operational_lifetime_years, links
        )
    deployment = {
        "node_count": plan.node_count,
        "network_power_watts": plan.network_power_w,
        "hardware_cost": plan.hardware_cost,
        "open_relays": list(plan.open_relay_ids),
        "single_visit_budget": benchmark_payment,
        "sensor_paths": {s: "->".join(path) for s, path in sorted(plan.sensor_paths.items())},
        "node_power_watts": {k: v for k, v in sorted(plan.node_power_w.items())},
    }
    return plan.network_power_w, plan.node_count, deployment


def _resolve_mtbf(doc: ScenarioDocument, node_count: int) -> float:
    if doc.overrides.mtbf_years is not None:
        return doc.overrides.mtbf_years
    return network_mtbf(node_count, doc.econ.failure_rate_per_hour)


def run_pipeline(doc: ScenarioDocument, analyses: tuple[str, ...] | None = None) -> Report:
    """Execute the requested analyses and assemble a report.

    ``analyses`` defaults to the document's ``run`` list. Scheduling always
    derives the lifetime function first (via the deployment layer when no
    fixed power is given); errors carry the pipeline stage they arose in.
    """
    requested = tuple(analyses) if analyses is not None else doc.run
    with _stage("validate"):
        violations = validate_document(doc)
        if "reliability" not in requested:
            violations = [v for v in violations if "hardware_choices" not in v]
        if violations:
            raise ScenarioError("; ".join(violations))

    report = Report(name=doc.name)
    econ = doc.econ
    power, node_count, deployment = _resolve_power(doc)
    report.deployment = deployment

    with _stage("lifetime-function"):
        lf = lifetime_function_from_power(econ, power, node_count)
    mtbf = _resolve_mtbf(doc, node_count)
    hardware_cost = econ.node_cost * node_count
    report.lifetime_function = {
        "slope_years_per_dollar": lf.slope_years_per_dollar,
        "intercepts_years": list(lf.intercepts_years),
        "threshold_first_visit": lf.threshold(1),
        "threshold_later_visits": lf.threshold(2) if lf.max_visits >= 2 else None,
        "network_power_watts": power,
        "node_count": node_count,
        "mtbf_years": mtbf,
    }

    if "schedule" in requested or "lifetime" in requested:
        stream = UnscheduledStream(
            mtbf_years=mtbf,
            repair_cost=econ.repair_cost,
            horizon_years=econ.operational_lifetime_years,
        )
        repair_npc = stream.npc(econ.interest_rate)
        report.npc_summary = {
            "mtbf_years": mtbf,
            "failure_count": stream.count,
            "repair_npc": repair_npc,
            "network_power_watts": power,
            "node_count": node_count,
            "hardware_cost": hardware_cost,
            "energy_rate_dollars_per_second": econ.energy_cost_per_joule * power,
        }

    if "schedule" in requested:
        with _stage("schedule"):
            result = optimal_number_of_visits(
                econ.max_visits,
                lf,
                econ.interest_rate,
                econ.operational_lifetime_years,
                unscheduled=stream,
                payment_caps=econ.max_visit_expenditure,
                hardware_cost=hardware_cost,
            )
            evl = evl_schedule(
                result.visit_count,
                lf,
                econ.interest_rate,
                econ.operational_lifetime_years,
                unscheduled=stream,
                hardware_cost=hardware_cost,
            )
        benchmark = result.candidates[0].npc_value
        report.schedule_rows = [
            {
                "visit": row.visit,
                "payment": row.payment,
                "lifetime_years": row.lifetime_years,
                "time_years": row.time_years,
                "hardware": row.hardware,
                "energy": row.energy,
                "labor": row.labor,
            }
            for row in result.breakdown
        ]
        report.npc_summary.update(
            {
                "benchmark_npc": benchmark,
                "optimal_npc": result.npc_value,
                "optimal_visits": result.visit_count,
                "percent_savings": percent_savings(benchmark, result.npc_value),
                "evl_npc_at_optimal_visits": evl.npc_value,
                "evl_gap_fraction": abs(evl.npc_value - result.npc_value)
                / result.npc_value,
                "flags": list(result.flags),
            }
        )
        report.figures["npc_by_visit_count"] = FigureTable(
            columns=("visits", "npc", "clamped"),
            rows=tuple(
                (cand.visit_count, cand.npc_value, cand.clamped)
                for cand in result.candidates
                if cand.error is None
            ),
        )

    if "reliability" in requested and doc.hardware_choices:
        with _stage("reliability"):
            report.reliability_rows = _reliability_rows(doc, node_count)

    return report


def _reliability_rows(doc: ScenarioDocument, node_count: int) -> list[dict]:
    econ = doc.econ
    winner, _ = best_choice(
        doc.hardware_choices,
        node_count,
        econ.operational_lifetime_years,
        econ.interest_rate,
        econ.repair_cost,
    )
    rows = []
    for choice in doc.hardware_choices:
        total = choice_cost(
            choice,
            node_count,
            econ.operational_lifetime_years,
            econ.interest_rate,
            econ.repair_cost,
        )
        hardware = node_count * choice.cost
        rows.append(
            {
                "id": choice.id,
                "redundancy": choice.redundancy,
                "cost_per_location": choice.cost,
                "failure_rate_per_hour": choice.failure_rate_per_hour,
                "repairs": repair_count(choice, node_count, econ.operational_lifetime_years),
                "hardware": hardware,
                "repair_npc": total - hardware,
                "total": total,
                "is_best": choice.id == winner.id,
            }
        )
    return rows


# ---------------------------------------------------------------------------
# figure tables


def _econ_with(econ: EconomicParams, **changes) -> EconomicParams:
    merged = {
        "node_cost": econ.node_cost,
        "energy_cost_per_joule": econ.energy_cost_per_joule,
        "labor_cost_per_visit": econ.labor_cost_per_visit,
        "interest_rate": econ.interest_rate,
        "operational_lifetime_years": econ.operational_lifetime_years,
        "repair_cost": econ.repair_cost,
        "failure_rate_per_hour": econ.failure_rate_per_hour,
        "max_visits": econ.max_visits,
        "max_visit_expenditure": econ.max_visit_expenditure,
    }
    merged.update(changes)
    return EconomicParams.create(**merged)


def _document_power(doc: ScenarioDocument) -> tuple[float, int]:
    power, count, _ = _resolve_power(doc)
    return power, count


def figure_npc_vs_visits(
    doc: ScenarioDocument,
    labor_costs: tuple[float, ...] = (140.0, 1000.0),
    normalize_labor: float = 1000.0,
) -> FigureTable:
    """Exact and equal-lifetime cost against the visit count, per labor cost.

    Values are normalized to the single-visit cost at the normalization
    labor cost.
    """
    econ = doc.econ
    power, count = _document_power(doc)
    mtbf = _resolve_mtbf(doc, count)
    stream = UnscheduledStream(mtbf, econ.repair_cost, econ.operational_lifetime_years)

    def solve(labor: float) -> tuple[SchedulerResult, LifetimeFunction]:
        variant = _econ_with(econ, labor_cost_per_visit=labor)
        lf = lifetime_function_from_power(variant, power, count)
        result = optimal_number_of_visits(
            variant.max_visits,
            lf,
            variant.interest_rate,
            variant.operational_lifetime_years,
            unscheduled=stream,
        )
        return result, lf

    norm_result, _ = solve(normalize_labor)
    normalizer = norm_result.candidates[0].npc_value

    rows = []
    for labor in labor_costs:
        result, lf = solve(labor)
        for cand in result.candidates:
            if cand.error is not None:
                continue
            evl = evl_schedule(
                cand.visit_count,
                lf,
                econ.interest_rate,
                econ.operational_lifetime_years,
                unscheduled=stream,
            )
            rows.append(
                (
                    labor,
                    cand.visit_count,
                    cand.npc_value,
                    evl.npc_value,
                    cand.npc_value / normalizer,
                    evl.npc_value / normalizer,
                    cand.visit_count == result.visit_count,
                )
            )
    return FigureTable(
        columns=(
            "labor_cost",
            "visits",
            "onpc",
            "evl",
            "onpc_normalized",
            "evl_normalized",
            "is_optimal",
        ),
        rows=tuple(rows),
    )


def figure_redundancy_sweep(doc: ScenarioDocument) -> FigureTable:
    """Hardware-plus-repair cost per choice, normalized to the first choice."""
    if not doc.hardware_choices:
        raise ScenarioError("figure needs hardware_choices in the document")
    econ = doc.econ
    _, count = _document_power(doc)
    totals = []
    for choice in doc.hardware_choices:
        total = choice_cost(
            choice, count, econ.operational_lifetime_years, econ.interest_rate, econ.repair_cost
        )
        totals.append((choice, total))
    normalizer = totals[0][1]
    rows = tuple(
        (
            choice.id,
            choice.redundancy,
            count * choice.cost,
            total - count * choice.cost,
            total,
            total / normalizer,
        )
        for choice, total in totals
    )
    return FigureTable(
        columns=("id", "redundancy", "hardware", "repair_npc", "total", "total_normalized"),
        rows=rows,
    )


def figure_cost_breakdown(
    doc: ScenarioDocument,
    normalizer: float | None = None,
) -> FigureTable:
    """Discounted hardware / repair / energy / labor components per visit count.

    Labor rows cover scheduled energy-restoration visits only; repair labor
    is part of the repair component. Normalized to the document's own
    single-visit cost unless an explicit normalizer is supplied.
    """
    econ = doc.econ
    power, count = _document_power(doc)
    mtbf = _resolve_mtbf(doc, count)
    lf = lifetime_function_from_power(econ, power, count)
    stream = UnscheduledStream(mtbf, econ.repair_cost, econ.operational_lifetime_years)
    repair_npc = stream.npc(econ.interest_rate)
    hardware_cost = econ.node_cost * count
    result = optimal_number_of_visits(
        econ.max_visits,
        lf,
        econ.interest_rate,
        econ.operational_lifetime_years,
        unscheduled=stream,
        hardware_cost=hardware_cost,
    )
    if normalizer is None:
        normalizer = result.candidates[0].npc_value
    rows = []
    for cand in result.candidates:
        if cand.error is None:
            energy_npc, labor_npc = _discounted_components(
                cand.schedule, lf, hardware_cost, econ.interest_rate
            )
            rows.append(
                (
                    cand.visit_count,
                    hardware_cost / normalizer,
                    repair_npc / normalizer,
                    energy_npc / normalizer,
                    labor_npc / normalizer,
                    cand.npc_value / normalizer,
                )
            )
    return FigureTable(
        columns=("visits", "hardware", "repair", "energy", "labor", "total"),
        rows=tuple(rows),
    )


def _discounted_components(schedule, lf, hardware_cost, interest_rate):
    from .npc import discount_factor
    from .scheduling import visit_breakdowns

    energy_npc = 0.0
    labor_npc = 0.0
    times = schedule.visit_times()
    for row in visit_breakdowns(schedule, lf, hardware_cost=hardware_cost):
        factor = discount_factor(interest_rate, times[row.visit - 1])
        energy_npc += row.energy * factor
        labor_npc += row.labor * factor
    return energy_npc, labor_npc


def figure_savings_vs_energy_rate(
    doc: ScenarioDocument,
    rate_min: float = 2e-6,
    rate_max: float = 2e-4,
    steps: int = 9,
    node_costs: tuple[float, ...] = (10.0, 100.0),
    labor_costs: tuple[float, ...] = (140.0, 1000.0),
) -> FigureTable:
    """Percent savings of the optimized schedule against the energy payment rate.

    The energy payment rate (dollars of energy per second) is swept on a log
    grid by scaling the network power; node hardware cost, labor cost, and
    MTBF variants give one curve each.
    """
    if steps < 2 or rate_min <= 0 or rate_max <= rate_min:
        raise ValueError("need steps >= 2 and 0 < rate_min < rate_max")
    econ = doc.econ
    _, count = _document_power(doc)
    mtbf_default = _resolve_mtbf(doc, count)
    mtbf_low = network_mtbf(count, 1e-5)
    ratio = (rate_max / rate_min) ** (1.0 / (steps - 1))
    rates = [rate_min * ratio**i for i in range(steps)]

    rows = []
    for mtbf in (mtbf_default, mtbf_low):
        stream = UnscheduledStream(mtbf, econ.repair_cost, econ.operational_lifetime_years)
        for node_cost in node_costs:
            for labor in labor_costs:
                variant = _econ_with(econ, node_cost=node_cost, labor_cost_per_visit=labor)
                for rate in rates:
                    power = rate / variant.energy_cost_per_joule
                    lf = lifetime_function_from_power(variant, power, count)
                    result = optimal_number_of_visits(
                        variant.max_visits,
                        lf,
                        variant.interest_rate,
                        variant.operational_lifetime_years,
                        unscheduled=stream,
                    )
                    benchmark = result.candidates[0].npc_value
                    rows.append(
                        (
                            rate,
                            node_cost,
                            labor,
                            mtbf,
                            result.visit_count,
                            percent_savings(benchmark, result.npc_value),
                        )
                    )
    return FigureTable(
        columns=(
            "energy_rate_dollars_per_second",
            "node_cost",
            "labor_cost",
            "mtbf_years",
            "optimal_visits",
            "percent_savings",
        ),
        rows=tuple(rows),
    )


def build_figures(
    doc: ScenarioDocument,
    labor_costs: tuple[float, ...] = (140.0, 1000.0),
    rate_min: float = 2e-6,
    rate_max: float = 2e-4,
    rate_steps: int = 9,
) -> Report:
    """Batch-produce every figure table for a document."""
    report = Report(name=doc.name)
    with _stage("figures"):
        report.figures["npc_vs_visits"] = figure_npc_vs_visits(doc, labor_costs)
        report.figures["cost_breakdown"] = figure_cost_breakdown(doc)
        report.figures["savings_vs_energy_rate"] = figure_savings_vs_energy_rate(
            doc, rate_min, rate_max, rate_steps
        )
        if doc.hardware_choices:
            report.figures["redundancy_sweep"] = figure_redundancy_sweep(doc)
    return report


# ---------------------------------------------------------------------------
# emission


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _csv_section(title: str, columns, rows) -> list[str]:
    lines = [f"# {title}", ",".join(columns)]
    for row in rows:
        lines.append(",".join(_format_cell(cell) for cell in row))
    lines.append("")
    return lines


def emit(report: Report, fmt: str) -> bytes:
    """Serialize a report; identical reports yield identical bytes.

    JSON keeps full float precision for lossless round-trips; CSV prints
    numbers with 12 significant digits, one section per table.
    """
    if fmt == "json":
        text = json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
        return text.encode("utf-8")
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")

    lines: list[str] = []
    if report.deployment is not None:
        dep = {
            k: v
            for k, v in report.deployment.items()
            if not isinstance(v, dict)
        }
        dep["open_relays"] = ";".join(report.deployment["open_relays"])
        lines += _csv_section("deployment", ("key", "value"), sorted(dep.items()))
    if report.lifetime_function is not None:
        flat = {
            k: v
            for k, v in report.lifetime_function.items()
            if not isinstance(v, list)
        }
        lines += _csv_section("lifetime_function", ("key", "value"), sorted(flat.items()))
    if report.schedule_rows:
        cols = ("visit", "payment", "lifetime_years", "time_years", "hardware", "energy", "labor")
        lines += _csv_section(
            "schedule", cols, [[row[c] for c in cols] for row in report.schedule_rows]
        )
    if report.npc_summary:
        items = [
            (k, v if not isinstance(v, list) else ";".join(map(str, v)))
            for k, v in sorted(report.npc_summary.items())
        ]
        lines += _csv_section("npc_summary", ("key", "value"), items)
    if report.reliability_rows:
        cols = (
            "id",
            "redundancy",
            "cost_per_location",
            "failure_rate_per_hour",
            "repairs",
            "hardware",
            "repair_npc",
            "total",
            "is_best",
        )
        lines += _csv_section(
            "reliability", cols, [[row[c] for c in cols] for row in report.reliability_rows]
        )
    for key in sorted(report.figures):
        table = report.figures[key]
        lines += _csv_section(f"figure:{key}", table.columns, table.rows)
    return ("\n".join(lines) + "\n").encode("utf-8")
