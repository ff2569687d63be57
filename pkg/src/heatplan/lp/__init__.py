from .problem import (
    Constraint,
    LinearProgram,
    LpSolution,
    add_budget_constraint,
    check_feasible,
    replace_objective,
    write_lp_format,
)
from .solve import solve
from .simplex import simplex_solve

__all__ = [
    "Constraint",
    "LinearProgram",
    "LpSolution",
    "add_budget_constraint",
    "check_feasible",
    "replace_objective",
    "write_lp_format",
    "solve",
    "simplex_solve",
]
