"""Solver-independent linear-program representation.

A LinearProgram is append-only while being built and treated as immutable
once handed to a solver; budget/objective rewrites return modified copies.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass

import numpy as np

SENSES = ("<=", "=", ">=")

FEASIBILITY_TOL = 1e-6


@dataclass
class Constraint:
    coeffs: dict[int, float]  # variable index -> coefficient
    sense: str
    rhs: float
    name: str = ""


@dataclass
class LpSolution:
    status: str  # optimal | infeasible | unbounded
    objective: float | None = None
    x: np.ndarray | None = None
    iterations: int = 0
    max_violation: float = 0.0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


class LinearProgram:
    def __init__(self):
        self.var_names: list[str] = []
        self.lower: list[float] = []
        self.upper: list[float] = []
        self.constraints: list[Constraint] = []
        self.objective: dict[int, float] = {}
        self.groups: dict[str, list[int]] = {}
        self.archived_objectives: list[dict[int, float]] = []
        self.metadata: dict = {}
        self._index: dict[str, int] = {}

    @property
    def num_variables(self) -> int:
        return len(self.var_names)

    def add_variable(self, name: str, lower: float = 0.0, upper: float = math.inf) -> int:
        if name in self._index:
            raise ValueError(f"duplicate variable name {name!r}")
        if lower > upper:
            raise ValueError(f"variable {name}: lower bound {lower} > upper bound {upper}")
        idx = len(self.var_names)
        self.var_names.append(name)
        self.lower.append(float(lower))
        self.upper.append(float(upper))
        self._index[name] = idx
        return idx

    def var(self, name: str) -> int:
        return self._index[name]

    def add_constraint(self, coeffs: dict[int, float], sense: str, rhs: float, name: str = ""):
        if sense not in SENSES:
            raise ValueError(f"unknown sense {sense!r}")
        for idx, c in coeffs.items():
            if not (0 <= idx < len(self.var_names)):
                raise ValueError(f"constraint {name!r}: undeclared variable index {idx}")
            if not math.isfinite(c):
                raise ValueError(f"constraint {name!r}: non-finite coefficient on {idx}")
        if not math.isfinite(rhs):
            raise ValueError(f"constraint {name!r}: non-finite rhs")
        self.constraints.append(Constraint(dict(coeffs), sense, float(rhs), name))

    def set_objective(self, coeffs: dict[int, float]):
        if not coeffs:
            raise ValueError("objective must reference at least one variable")
        for idx, c in coeffs.items():
            if not (0 <= idx < len(self.var_names)):
                raise ValueError(f"objective: undeclared variable index {idx}")
            if not math.isfinite(c):
                raise ValueError(f"objective: non-finite coefficient on {idx}")
        self.objective = dict(coeffs)

    def add_group(self, name: str, indices: list[int]):
        self.groups[name] = list(indices)

    def objective_value(self, x: np.ndarray) -> float:
        return float(sum(c * x[i] for i, c in self.objective.items()))

    def copy(self) -> "LinearProgram":
        return copy.deepcopy(self)


def check_feasible(lp: LinearProgram, x: np.ndarray, tol: float = FEASIBILITY_TOL) -> float:
    """Max scaled violation, re-evaluated from raw coefficient data."""
    worst = 0.0
    for i in range(lp.num_variables):
        worst = max(worst, lp.lower[i] - x[i], x[i] - lp.upper[i])
    for con in lp.constraints:
        lhs = sum(c * x[i] for i, c in con.coeffs.items())
        scale = max(1.0, abs(con.rhs), max((abs(c) for c in con.coeffs.values()), default=1.0))
        if con.sense == "<=":
            v = (lhs - con.rhs) / scale
        elif con.sense == ">=":
            v = (con.rhs - lhs) / scale
        else:
            v = abs(lhs - con.rhs) / scale
        worst = max(worst, v)
    return worst


def add_budget_constraint(
    lp: LinearProgram, cost_coefficients: dict[int, float], budget: float
) -> LinearProgram:
    """Append a total-cost ceiling constraint; the original objective stays usable.

    Warns (via metadata flag) when the budget sits below the recorded optimum,
    which guarantees infeasibility up to tolerance.
    """
    out = lp.copy()
    out.add_constraint(dict(cost_coefficients), "<=", budget, name="cost_budget")
    best = out.metadata.get("optimal_cost")
    if best is not None and budget < best * (1 - FEASIBILITY_TOL):
        out.metadata["budget_below_optimum"] = True
    out.metadata["budget"] = budget
    return out


def replace_objective(lp: LinearProgram, new_objective: dict[int, float]) -> LinearProgram:
    """Swap the objective, archiving the old one; constraints untouched."""
    out = lp.copy()
    out.archived_objectives.append(dict(out.objective))
    out.set_objective(new_objective)
    return out


def write_lp_format(lp: LinearProgram, path) -> None:
    """Export in the CPLEX-style LP text format for external cross-checking."""

    def term(i: int, c: float) -> str:
        sign = "+" if c >= 0 else "-"
        return f"{sign} {abs(c):.12g} {lp.var_names[i]}"

    lines = ["Minimize", " obj: " + " ".join(term(i, c) for i, c in sorted(lp.objective.items()))]
    lines.append("Subject To")
    for k, con in enumerate(lp.constraints):
        op = {"<=": "<=", ">=": ">=", "=": "="}[con.sense]
        body = " ".join(term(i, c) for i, c in sorted(con.coeffs.items()))
        lines.append(f" c{k}: {body} {op} {con.rhs:.12g}")
    lines.append("Bounds")
    for i, name in enumerate(lp.var_names):
        lo, hi = lp.lower[i], lp.upper[i]
        lo_s = f"{lo:.12g}" if math.isfinite(lo) else "-inf"
        hi_s = f"{hi:.12g}" if math.isfinite(hi) else "+inf"
        lines.append(f" {lo_s} <= {name} <= {hi_s}")
    lines.append("End")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
