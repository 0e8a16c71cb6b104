"""Minimum net-present-cost planning of wireless sensor network deployment
and maintenance: how many maintenance visits to make, when, how much to
spend at each, how each expenditure splits into hardware, energy, and
labor, and which hardware-redundancy level keeps unscheduled repairs cheap.
"""

from .document import (
    ScenarioDocument,
    load_default_document,
    load_document,
    validate_document,
)
from .errors import InfeasibleError, PlanningError, ScenarioError, SolverError
from .lifetime import (
    DeploymentPlan,
    LifetimeFunction,
    derive_lifetime_function,
    enumerate_visit_lifetime,
    lifetime_function_from_power,
    maximize_visit_lifetime,
    min_power_routing,
    minimum_horizon_deployment,
    network_mtbf,
)
from .npc import (
    PaymentSchedule,
    UnscheduledStream,
    discount_factor,
    grid_oracle_minimize,
    npc,
    percent_savings,
    schedule_from_tail,
)
from .radio import (
    Link,
    build_links,
    default_tx_power_table,
    friis_required_power,
    max_link_distance,
    select_tx_level,
)
from .reliability import (
    HardwareChoice,
    best_choice,
    choice_cost,
    redundancy_sweep,
    repair_count,
)
from .report import (
    FigureTable,
    Report,
    build_figures,
    emit,
    run_pipeline,
)
from .scenario import (
    EconomicParams,
    Location,
    RadioModel,
    Scenario,
    validate_economics,
    validate_scenario,
)
from .scheduling import (
    SchedulerResult,
    evl_schedule,
    next_payment,
    optimal_number_of_visits,
    optimal_payments,
    single_visit_schedule,
    stationarity_residual,
    visit_breakdowns,
)

__version__ = "0.1.0"

__all__ = [
    "DeploymentPlan",
    "EconomicParams",
    "FigureTable",
    "HardwareChoice",
    "InfeasibleError",
    "LifetimeFunction",
    "Link",
    "Location",
    "PaymentSchedule",
    "PlanningError",
    "RadioModel",
    "Report",
    "Scenario",
    "ScenarioDocument",
    "ScenarioError",
    "SchedulerResult",
    "SolverError",
    "UnscheduledStream",
    "best_choice",
    "build_figures",
    "build_links",
    "choice_cost",
    "default_tx_power_table",
    "derive_lifetime_function",
    "discount_factor",
    "emit",
    "enumerate_visit_lifetime",
    "evl_schedule",
    "friis_required_power",
    "grid_oracle_minimize",
    "lifetime_function_from_power",
    "load_default_document",
    "load_document",
    "max_link_distance",
    "maximize_visit_lifetime",
    "min_power_routing",
    "minimum_horizon_deployment",
    "network_mtbf",
    "next_payment",
    "npc",
    "optimal_number_of_visits",
    "optimal_payments",
    "percent_savings",
    "redundancy_sweep",
    "repair_count",
    "run_pipeline",
    "schedule_from_tail",
    "select_tx_level",
    "single_visit_schedule",
    "stationarity_residual",
    "validate_document",
    "validate_economics",
    "validate_scenario",
    "visit_breakdowns",
]
