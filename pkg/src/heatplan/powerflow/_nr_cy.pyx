# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Newton-Raphson kernel for a single power-flow snapshot.

Interface twin of _nr_py.solve_snapshot; selected at import by engine.py.
The per-iteration mismatch/Jacobian assembly is the O(N^2) hot loop that
dominates year-long multi-design campaigns.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin, fabs

cnp.import_array()


def calc_injections(cnp.ndarray[double, ndim=2] G, cnp.ndarray[double, ndim=2] B,
                    cnp.ndarray[double, ndim=1] V, cnp.ndarray[double, ndim=1] theta):
    cdef int n = V.shape[0]
    cdef cnp.ndarray[double, ndim=1] P = np.zeros(n)
    cdef cnp.ndarray[double, ndim=1] Q = np.zeros(n)
    cdef int i, j
    cdef double dt, ct, st, p, q
    for i in range(n):
        p = 0.0
        q = 0.0
        for j in range(n):
            dt = theta[i] - theta[j]
            ct = cos(dt)
            st = sin(dt)
            p += V[j] * (G[i, j] * ct + B[i, j] * st)
            q += V[j] * (G[i, j] * st - B[i, j] * ct)
        P[i] = V[i] * p
        Q[i] = V[i] * q
    return P, Q


def solve_snapshot(cnp.ndarray[double, ndim=2] G, cnp.ndarray[double, ndim=2] B,
                   cnp.ndarray[double, ndim=1] P_spec, cnp.ndarray[double, ndim=1] Q_spec,
                   int slack,
                   cnp.ndarray[double, ndim=1] V0, cnp.ndarray[double, ndim=1] theta0,
                   double tol=1e-8, int max_iter=30):
    """Returns (V, theta, iterations, converged)."""
    cdef int n = V0.shape[0]
    cdef int k = n - 1  # number of PQ buses
    cdef cnp.ndarray[long, ndim=1] pq = np.array(
        [i for i in range(n) if i != slack], dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] V = V0.copy()
    cdef cnp.ndarray[double, ndim=1] theta = theta0.copy()
    cdef cnp.ndarray[double, ndim=1] P = np.zeros(n)
    cdef cnp.ndarray[double, ndim=1] Q = np.zeros(n)
    cdef cnp.ndarray[double, ndim=1] mis = np.zeros(2 * k)
    cdef cnp.ndarray[double, ndim=2] Jac = np.zeros((2 * k, 2 * k))
    cdef int it, a, b, i, j
    cdef double dt, ct, st, p, q, worst, hij, nij
    cdef cnp.ndarray[double, ndim=1] step

    for it in range(max_iter + 1):
        # injections and mismatch
        worst = 0.0
        for i in range(n):
            p = 0.0
            q = 0.0
            for j in range(n):
                dt = theta[i] - theta[j]
                ct = cos(dt)
                st = sin(dt)
                p += V[j] * (G[i, j] * ct + B[i, j] * st)
                q += V[j] * (G[i, j] * st - B[i, j] * ct)
            P[i] = V[i] * p
            Q[i] = V[i] * q
        for a in range(k):
            i = pq[a]
            mis[a] = P_spec[i] - P[i]
            mis[k + a] = Q_spec[i] - Q[i]
            if fabs(mis[a]) > worst:
                worst = fabs(mis[a])
            if fabs(mis[k + a]) > worst:
                worst = fabs(mis[k + a])
        if worst < tol:
            return V, theta, it, True
        if it == max_iter:
            break

        # Jacobian blocks [[H, N], [J, L]] restricted to PQ buses
        for a in range(k):
            i = pq[a]
            for b in range(k):
                j = pq[b]
                if i == j:
                    Jac[a, b] = -Q[i] - B[i, i] * V[i] * V[i]
                    Jac[a, k + b] = P[i] / V[i] + G[i, i] * V[i]
                    Jac[k + a, b] = P[i] - G[i, i] * V[i] * V[i]
                    Jac[k + a, k + b] = Q[i] / V[i] - B[i, i] * V[i]
                else:
                    dt = theta[i] - theta[j]
                    ct = cos(dt)
                    st = sin(dt)
                    hij = V[i] * V[j] * (G[i, j] * st - B[i, j] * ct)
                    nij = V[i] * (G[i, j] * ct + B[i, j] * st)
                    Jac[a, b] = hij
                    Jac[a, k + b] = nij
                    Jac[k + a, b] = -V[j] * nij
                    Jac[k + a, k + b] = hij / V[j]
        try:
            step = np.linalg.solve(Jac, mis)
        except np.linalg.LinAlgError:
            return V, theta, it, False
        for a in range(k):
            theta[pq[a]] += step[a]
            V[pq[a]] += step[k + a]
        for i in range(n):
            if not (V[i] > 0.0) or V[i] != V[i]:
                return V, theta, it, False
    return V, theta, max_iter, False
