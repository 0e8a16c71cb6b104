"""Exception taxonomy mapped to CLI exit codes.

Exit codes: 0 ok, 1 validation, 2 infeasible, 3 solver failure, 4 io.
"""


class PlanningError(Exception):
    """Base class for all toolkit failures."""

    exit_code = 1

    def __init__(self, message: str, stage: str | None = None):
        self.stage = stage
        super().__init__(message)

    def __str__(self) -> str:
        base = super().__str__()
        if self.stage:
            return f"[{self.stage}] {base}"
        return base


class ScenarioError(PlanningError):
    """Invalid scenario data: bad parameters, schema violations, degenerate networks."""

    exit_code = 1


class InfeasibleError(PlanningError):
    """Structurally unsolvable instance: unreachable sinks, out-of-range links, empty feasible sets."""

    exit_code = 2


class SolverError(PlanningError):
    """Numerical solver failure: lost root bracket, non-convergence."""

    exit_code = 3
