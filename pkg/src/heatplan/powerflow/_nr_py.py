"""Pure-NumPy Newton-Raphson kernel for a single power-flow snapshot.

Interface twin of the compiled kernel in _nr_cy.pyx; engine.py picks one
at import time. All quantities per-unit, angles in radians. Every non-slack
bus is a PQ bus.
"""

from __future__ import annotations

import numpy as np


def calc_injections(G: np.ndarray, B: np.ndarray, V: np.ndarray, theta: np.ndarray):
    """P_i, Q_i implied by the voltage state (polar power-balance equations)."""
    dtheta = theta[:, None] - theta[None, :]
    cos_t, sin_t = np.cos(dtheta), np.sin(dtheta)
    P = V * ((G * cos_t + B * sin_t) @ V)
    Q = V * ((G * sin_t - B * cos_t) @ V)
    return P, Q


def _jacobian(G, B, V, theta, P, Q, pq):
    dtheta = theta[:, None] - theta[None, :]
    cos_t, sin_t = np.cos(dtheta), np.sin(dtheta)
    VV = V[:, None] * V[None, :]
    # off-diagonal blocks
    H = VV * (G * sin_t - B * cos_t)  # dP/dtheta
    N = V[:, None] * (G * cos_t + B * sin_t)  # dP/dV
    J = -VV * (G * cos_t + B * sin_t)  # dQ/dtheta
    L = V[:, None] * (G * sin_t - B * cos_t)  # dQ/dV
    d = np.arange(len(V))
    H[d, d] = -Q - B.diagonal() * V**2
    N[d, d] = P / V + G.diagonal() * V
    J[d, d] = P - G.diagonal() * V**2
    L[d, d] = Q / V - B.diagonal() * V
    return np.block([[H[np.ix_(pq, pq)], N[np.ix_(pq, pq)]], [J[np.ix_(pq, pq)], L[np.ix_(pq, pq)]]])


def solve_snapshot(
    G: np.ndarray,
    B: np.ndarray,
    P_spec: np.ndarray,
    Q_spec: np.ndarray,
    slack: int,
    V0: np.ndarray,
    theta0: np.ndarray,
    tol: float = 1e-8,
    max_iter: int = 30,
):
    """Returns (V, theta, iterations, converged)."""
    n = len(V0)
    pq = np.array([i for i in range(n) if i != slack], dtype=int)
    V = V0.copy()
    theta = theta0.copy()
    for it in range(max_iter + 1):
        P, Q = calc_injections(G, B, V, theta)
        mismatch = np.concatenate([P_spec[pq] - P[pq], Q_spec[pq] - Q[pq]])
        if np.max(np.abs(mismatch)) < tol:
            return V, theta, it, True
        if it == max_iter:
            break
        Jac = _jacobian(G, B, V, theta, P, Q, pq)
        try:
            step = np.linalg.solve(Jac, mismatch)
        except np.linalg.LinAlgError:
            return V, theta, it, False
        k = len(pq)
        theta[pq] += step[:k]
        V[pq] += step[k:]
        if np.any(V <= 0) or not np.all(np.isfinite(V)):
            return V, theta, it, False
    return V, theta, max_iter, False
