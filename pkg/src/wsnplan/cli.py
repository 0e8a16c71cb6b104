"""Command-line interface: batch planning runs over JSON scenario documents.

Subcommands: ``plan`` (full pipeline), ``lifetime`` (deployment layer only),
``schedule`` (maintenance schedule only), ``reliability`` (hardware-choice
sweep), ``figures`` (batch figure tables). Exit codes: 0 ok, 1 validation,
2 infeasible, 3 solver failure, 4 io.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .document import bundled_document_path, load_document
from .errors import PlanningError
from .report import build_figures, emit, run_pipeline


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--scenario",
        type=Path,
        default=None,
        help="scenario document path (default: the bundled gas-monitoring defaults)",
    )
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", type=Path, default=None, help="output path (default: stdout)")
    parser.add_argument(
        "--seed",
        type=int,
        default=0,
        help="reserved; every analysis is deterministic",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wsnplan",
        description="Minimum net-present-cost planning of sensor-network deployment and maintenance.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("plan", "run every analysis the document requests"),
        ("lifetime", "deployment layer only: routing, power draw, lifetime function"),
        ("schedule", "maintenance schedule from the document's lifetime function"),
        ("reliability", "hardware choice sweep against unscheduled-repair cost"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        _add_common(cmd)

    figures = sub.add_parser("figures", help="batch-produce every figure table")
    _add_common(figures)
    figures.add_argument(
        "--labor-costs",
        type=float,
        nargs="+",
        default=(140.0, 1000.0),
        help="labor cost values for the visit-count curves",
    )
    figures.add_argument("--phi-min", type=float, default=2e-6, help="energy payment rate sweep start ($/s)")
    figures.add_argument("--phi-max", type=float, default=2e-4, help="energy payment rate sweep end ($/s)")
    figures.add_argument("--phi-steps", type=int, default=9, help="points on the sweep grid")
    return parser


def _write(payload: bytes, out: Path | None) -> None:
    if out is None:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
    else:
        out.write_bytes(payload)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    scenario_path = args.scenario or bundled_document_path("default_scenario.json")
    try:
        doc = load_document(scenario_path)
        if args.command == "plan":
            report = run_pipeline(doc)
        elif args.command == "lifetime":
            report = run_pipeline(doc, analyses=("lifetime",))
        elif args.command == "schedule":
            report = run_pipeline(doc, analyses=("schedule",))
        elif args.command == "reliability":
            report = run_pipeline(doc, analyses=("reliability",))
        else:
            report = build_figures(
                doc,
                labor_costs=tuple(args.labor_costs),
                rate_min=args.phi_min,
                rate_max=args.phi_max,
                rate_steps=args.phi_steps,
            )
        _write(emit(report, args.format), args.out)
    except PlanningError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
