"""Production LP solving via scipy's HiGHS interface.

Every optimal solution is re-checked by the independent feasibility
evaluator in problem.check_feasible before it is returned.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .problem import FEASIBILITY_TOL, LinearProgram, LpSolution, check_feasible


class IterationLimitError(RuntimeError):
    pass


def _to_arrays(lp: LinearProgram):
    n = lp.num_variables
    c = np.zeros(n)
    for i, v in lp.objective.items():
        c[i] = v

    ub_rows, ub_rhs, eq_rows, eq_rhs = [], [], [], []
    for con in lp.constraints:
        idx = np.fromiter(con.coeffs.keys(), dtype=int)
        val = np.fromiter(con.coeffs.values(), dtype=float)
        if con.sense == "=":
            eq_rows.append((idx, val))
            eq_rhs.append(con.rhs)
        elif con.sense == "<=":
            ub_rows.append((idx, val))
            ub_rhs.append(con.rhs)
        else:
            ub_rows.append((idx, -val))
            ub_rhs.append(-con.rhs)

    def build(rows):
        if not rows:
            return None
        data, ri, ci = [], [], []
        for r, (idx, val) in enumerate(rows):
            ri.extend([r] * len(idx))
            ci.extend(idx.tolist())
            data.extend(val.tolist())
        return sparse.csr_matrix((data, (ri, ci)), shape=(len(rows), n))

    bounds = list(zip(lp.lower, lp.upper))
    return c, build(ub_rows), np.array(ub_rhs), build(eq_rows), np.array(eq_rhs), bounds


def solve(lp: LinearProgram, *, tol: float = FEASIBILITY_TOL, max_iterations: int = 200_000) -> LpSolution:
    c, A_ub, b_ub, A_eq, b_eq, bounds = _to_arrays(lp)
    res = linprog(
        c,
        A_ub=A_ub,
        b_ub=b_ub if A_ub is not None else None,
        A_eq=A_eq,
        b_eq=b_eq if A_eq is not None else None,
        bounds=bounds,
        method="highs",
        options={"maxiter": max_iterations, "presolve": True},
    )
    if res.status == 1:
        raise IterationLimitError(f"LP iteration limit {max_iterations} exhausted")
    if res.status == 2:
        return LpSolution(status="infeasible", iterations=int(res.nit or 0))
    if res.status == 3:
        return LpSolution(status="unbounded", iterations=int(res.nit or 0))
    if res.status != 0:
        raise RuntimeError(f"LP solver failure: {res.message}")

    x = np.asarray(res.x)
    violation = check_feasible(lp, x, tol)
    if violation > 10 * tol:
        raise RuntimeError(f"solver returned infeasible point (violation {violation:.2e})")
    return LpSolution(
        status="optimal",
        objective=float(res.fun),
        x=x,
        iterations=int(res.nit or 0),
        max_violation=violation,
    )
