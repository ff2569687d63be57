"""Dense two-phase tableau simplex with Bland's rule.

Correctness oracle for desk-scale instances (<= ~200 variables); the
production path goes through solve.solve(). Bland's rule guarantees
termination on degenerate problems at the cost of speed.
"""

from __future__ import annotations

import math

import numpy as np

from .problem import LinearProgram, LpSolution

_EPS = 1e-9


def _standardize(lp: LinearProgram):
    """Rewrite to min c'y, A y = b, y >= 0, recording the inverse transform.

    Finite lower bounds are shifted out; free variables are split into a
    positive and a negative part; finite upper bounds become <= rows.
    """
    n = lp.num_variables
    # y-index bookkeeping: each original var maps to (pos_idx, neg_idx_or_None, shift)
    mapping = []
    ncols = 0
    for i in range(n):
        lo = lp.lower[i]
        if math.isfinite(lo):
            mapping.append((ncols, None, lo))
            ncols += 1
        else:
            mapping.append((ncols, ncols + 1, 0.0))
            ncols += 2

    rows = []  # (dense coeffs over y, sense, rhs)

    def to_row(coeffs: dict[int, float]):
        row = np.zeros(ncols)
        shift_total = 0.0
        for i, c in coeffs.items():
            pos, neg, shift = mapping[i]
            row[pos] += c
            if neg is not None:
                row[neg] -= c
            shift_total += c * shift
        return row, shift_total

    for con in lp.constraints:
        row, shift = to_row(con.coeffs)
        rows.append((row, con.sense, con.rhs - shift))
    for i in range(n):
        hi = lp.upper[i]
        if math.isfinite(hi):
            pos, neg, shift = mapping[i]
            row = np.zeros(ncols)
            row[pos] = 1.0
            if neg is not None:
                row[neg] = -1.0
            rows.append((row, "<=", hi - shift))

    c_row, c_shift = to_row(lp.objective)
    return mapping, rows, c_row, c_shift, ncols


def _bland_pivot(tableau, basis, num_cols):
    """One simplex iteration; returns False when optimal, raises on unbounded."""
    obj = tableau[-1, :num_cols]
    enter = -1
    for j in range(num_cols):
        if obj[j] < -_EPS:
            enter = j
            break
    if enter < 0:
        return False
    col = tableau[:-1, enter]
    rhs = tableau[:-1, -1]
    best_ratio = math.inf
    leave = -1
    for r in range(len(col)):
        if col[r] > _EPS:
            ratio = rhs[r] / col[r]
            if ratio < best_ratio - _EPS or (
                abs(ratio - best_ratio) <= _EPS and (leave < 0 or basis[r] < basis[leave])
            ):
                best_ratio = ratio
                leave = r
    if leave < 0:
        raise _Unbounded()
    piv = tableau[leave, enter]
    tableau[leave] /= piv
    for r in range(tableau.shape[0]):
        if r != leave and abs(tableau[r, enter]) > 0:
            tableau[r] -= tableau[r, enter] * tableau[leave]
    basis[leave] = enter
    return True


class _Unbounded(Exception):
    pass


def simplex_solve(lp: LinearProgram, max_iterations: int = 100_000) -> LpSolution:
    mapping, rows, c_row, c_shift, ncols = _standardize(lp)

    m = len(rows)
    # slack/surplus columns, then artificials
    nslack = sum(1 for _, sense, _ in rows if sense != "=")
    A = np.zeros((m, ncols + nslack + m))
    b = np.zeros(m)
    slack_at = ncols
    art_at = ncols + nslack
    basis = [-1] * m
    for r, (row, sense, rhs) in enumerate(rows):
        A[r, :ncols] = row
        b[r] = rhs
        if sense == "<=":
            A[r, slack_at] = 1.0
            slack_at += 1
        elif sense == ">=":
            A[r, slack_at] = -1.0
            slack_at += 1
        if b[r] < 0:
            A[r] = -A[r]
            b[r] = -b[r]
        A[r, art_at + r] = 1.0
        basis[r] = art_at + r

    total_cols = A.shape[1]
    iterations = 0

    # phase 1: minimize artificial sum
    tableau = np.zeros((m + 1, total_cols + 1))
    tableau[:m, :total_cols] = A
    tableau[:m, -1] = b
    tableau[-1, art_at : art_at + m] = 1.0
    for r in range(m):
        tableau[-1] -= tableau[r]
    try:
        while _bland_pivot(tableau, basis, total_cols):
            iterations += 1
            if iterations > max_iterations:
                raise RuntimeError("simplex iteration limit exhausted (phase 1)")
    except _Unbounded:  # phase 1 objective is bounded below by 0
        raise RuntimeError("phase-1 unbounded: inconsistent tableau")

    if tableau[-1, -1] < -1e-7:
        return LpSolution(status="infeasible", iterations=iterations)

    # drive any leftover artificials out of the basis, drop redundant rows
    keep = []
    for r in range(m):
        if basis[r] >= art_at:
            pivoted = False
            for j in range(art_at):
                if abs(tableau[r, j]) > _EPS:
                    piv = tableau[r, j]
                    tableau[r] /= piv
                    for rr in range(m + 1):
                        if rr != r and abs(tableau[rr, j]) > 0:
                            tableau[rr] -= tableau[rr, j] * tableau[r]
                    basis[r] = j
                    pivoted = True
                    break
            if not pivoted:
                continue  # redundant row
        keep.append(r)

    # phase 2: original objective over non-artificial columns
    m2 = len(keep)
    tab2 = np.zeros((m2 + 1, art_at + 1))
    basis2 = []
    for rr, r in enumerate(keep):
        tab2[rr, :art_at] = tableau[r, :art_at]
        tab2[rr, -1] = tableau[r, -1]
        basis2.append(basis[r])
    tab2[-1, :ncols] = c_row
    for rr in range(m2):
        bi = basis2[rr]
        if abs(tab2[-1, bi]) > 0:
            tab2[-1] -= tab2[-1, bi] * tab2[rr]

    try:
        while _bland_pivot(tab2, basis2, art_at):
            iterations += 1
            if iterations > max_iterations:
                raise RuntimeError("simplex iteration limit exhausted (phase 2)")
    except _Unbounded:
        return LpSolution(status="unbounded", iterations=iterations)

    y = np.zeros(art_at)
    for rr, bi in enumerate(basis2):
        y[bi] = tab2[rr, -1]
    x = np.zeros(lp.num_variables)
    for i, (pos, neg, shift) in enumerate(mapping):
        x[i] = y[pos] + shift - (y[neg] if neg is not None else 0.0)
    objective = float(np.dot(c_row, y[:ncols]) + c_shift)
    return LpSolution(status="optimal", objective=objective, x=x, iterations=iterations)
