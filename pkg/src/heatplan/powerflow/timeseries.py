"""Time-series AC power flow: per-snapshot Newton-Raphson solves and loadings."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import engine
from .grid import Branch, ElectricGrid, build_admittance

DEFAULT_POWER_FACTOR = 0.95
PF_TOL = 1e-8
MAX_NR_ITER = 30


@dataclass
class InjectionSet:
    """Per-bus MW load and generation series; Q follows from the power factor."""

    p_load: np.ndarray  # (n_bus, T) MW
    p_gen: np.ndarray
    power_factor: float = DEFAULT_POWER_FACTOR

    def __post_init__(self):
        self.p_load = np.atleast_2d(np.asarray(self.p_load, dtype=float))
        self.p_gen = np.atleast_2d(np.asarray(self.p_gen, dtype=float))
        if self.p_load.shape != self.p_gen.shape:
            raise ValueError("p_load and p_gen shapes differ")
        if not (0 < self.power_factor <= 1):
            raise ValueError(f"power factor {self.power_factor} outside (0, 1]")

    @property
    def tan_phi(self) -> float:
        return math.tan(math.acos(self.power_factor))

    @property
    def num_snapshots(self) -> int:
        return self.p_load.shape[1]

    def add(self, other: "InjectionSet") -> "InjectionSet":
        return InjectionSet(
            self.p_load + other.p_load, self.p_gen + other.p_gen, self.power_factor
        )


@dataclass
class FlowResult:
    bus_ids: list[str]
    branch_ids: list[str]
    branch_kinds: list[str]
    branch_ratings_mva: list[float]
    v_pu: np.ndarray  # (T, n_bus)
    theta_rad: np.ndarray
    p_from_mw: np.ndarray  # (T, n_branch)
    q_from_mvar: np.ndarray
    loading_percent: np.ndarray  # (T, n_branch), NaN on diverged snapshots
    slack_p_mw: np.ndarray  # (T,)
    slack_q_mvar: np.ndarray
    converged: np.ndarray  # (T,) bool
    iterations: np.ndarray

    @property
    def divergence_count(self) -> int:
        return int((~self.converged).sum())

    def loading_of(self, kind: str, basis: str = "apparent") -> tuple[list[str], np.ndarray]:
        """(component ids, loading matrix (T, n)) for 'line' or 'trafo'.

        basis 'apparent' uses the exported apparent-power loadings; 'active'
        recomputes |P_from| against the rating.
        """
        cols = [i for i, k in enumerate(self.branch_kinds) if k == kind]
        ids = [self.branch_ids[i] for i in cols]
        if basis == "apparent":
            return ids, self.loading_percent[:, cols]
        if basis == "active":
            ratings = np.array([self.branch_ratings_mva[i] for i in cols])
            return ids, 100.0 * np.abs(self.p_from_mw[:, cols]) / ratings
        raise ValueError(f"unknown loading basis {basis!r}")

    def to_dict(self) -> dict:
        return {
            "bus_ids": self.bus_ids,
            "branch_ids": self.branch_ids,
            "branch_kinds": self.branch_kinds,
            "branch_ratings_mva": list(self.branch_ratings_mva),
            "v_pu": self.v_pu.tolist(),
            "theta_rad": self.theta_rad.tolist(),
            "p_from_mw": self.p_from_mw.tolist(),
            "q_from_mvar": self.q_from_mvar.tolist(),
            "loading_percent": self.loading_percent.tolist(),
            "slack_p_mw": self.slack_p_mw.tolist(),
            "slack_q_mvar": self.slack_q_mvar.tolist(),
            "converged": self.converged.astype(int).tolist(),
            "iterations": self.iterations.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FlowResult":
        return cls(
            bus_ids=list(d["bus_ids"]),
            branch_ids=list(d["branch_ids"]),
            branch_kinds=list(d["branch_kinds"]),
            branch_ratings_mva=list(d.get("branch_ratings_mva", [])),
            v_pu=np.array(d["v_pu"]),
            theta_rad=np.array(d["theta_rad"]),
            p_from_mw=np.array(d["p_from_mw"]),
            q_from_mvar=np.array(d["q_from_mvar"]),
            loading_percent=np.array(d["loading_percent"]),
            slack_p_mw=np.array(d["slack_p_mw"]),
            slack_q_mvar=np.array(d["slack_q_mvar"]),
            converged=np.array(d["converged"], dtype=bool),
            iterations=np.array(d["iterations"]),
        )


def _branch_flows(grid: ElectricGrid, branch: Branch, Vc: np.ndarray):
    """Complex power (MVA) entering the branch at each end."""
    f, t = grid.bus_index(branch.from_bus), grid.bus_index(branch.to_bus)
    y = 1.0 / complex(branch.r_pu, branch.x_pu)
    ysh = complex(0.0, branch.b_shunt_pu / 2.0)
    i_from = y * (Vc[f] - Vc[t]) + ysh * Vc[f]
    i_to = y * (Vc[t] - Vc[f]) + ysh * Vc[t]
    s_from = Vc[f] * np.conj(i_from) * grid.s_base_mva
    s_to = Vc[t] * np.conj(i_to) * grid.s_base_mva
    return s_from, s_to


def compute_loadings(grid: ElectricGrid, Vc: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-branch loading %% (apparent power at the higher-loaded end) plus P, Q from-end."""
    nb = len(grid.branches)
    loading = np.zeros(nb)
    p_from = np.zeros(nb)
    q_from = np.zeros(nb)
    for k, br in enumerate(grid.branches):
        s_from, s_to = _branch_flows(grid, br, Vc)
        loading[k] = 100.0 * max(abs(s_from), abs(s_to)) / br.rating_mva
        p_from[k] = s_from.real
        q_from[k] = s_from.imag
    return loading, p_from, q_from


def solve_snapshot(
    grid: ElectricGrid,
    p_inj_mw: np.ndarray,
    q_inj_mvar: np.ndarray,
    *,
    Y: np.ndarray | None = None,
    tol: float = PF_TOL,
    max_iter: int = MAX_NR_ITER,
):
    """Newton-Raphson from a flat start; returns (V, theta, iterations, converged)."""
    if Y is None:
        Y = build_admittance(grid)
    n = len(grid.buses)
    G, B = np.ascontiguousarray(Y.real), np.ascontiguousarray(Y.imag)
    p_spec = np.asarray(p_inj_mw, dtype=float) / grid.s_base_mva
    q_spec = np.asarray(q_inj_mvar, dtype=float) / grid.s_base_mva
    return engine.solve_snapshot(
        G, B, p_spec, q_spec, grid.slack_index, np.ones(n), np.zeros(n), tol, max_iter
    )


def run_timeseries(
    grid: ElectricGrid,
    injections: InjectionSet,
    *,
    tol: float = PF_TOL,
    max_iter: int = MAX_NR_ITER,
) -> FlowResult:
    """Independent per-snapshot solves over the horizon."""
    Y = build_admittance(grid)
    n = len(grid.buses)
    T = injections.num_snapshots
    nb = len(grid.branches)
    tan_phi = injections.tan_phi

    v = np.ones((T, n))
    theta = np.zeros((T, n))
    loading = np.full((T, nb), np.nan)
    p_from = np.full((T, nb), np.nan)
    q_from = np.full((T, nb), np.nan)
    slack_p = np.full(T, np.nan)
    slack_q = np.full(T, np.nan)
    converged = np.zeros(T, dtype=bool)
    iterations = np.zeros(T, dtype=int)
    slack = grid.slack_index

    for t in range(T):
        p_inj = injections.p_gen[:, t] - injections.p_load[:, t]
        q_inj = p_inj * tan_phi
        V, th, it, ok = solve_snapshot(grid, p_inj, q_inj, Y=Y, tol=tol, max_iter=max_iter)
        v[t], theta[t] = V, th
        converged[t] = ok
        iterations[t] = it
        if ok:
            Vc = V * np.exp(1j * th)
            loading[t], p_from[t], q_from[t] = compute_loadings(grid, Vc)
            P, Q = engine.calc_injections(
                np.ascontiguousarray(Y.real), np.ascontiguousarray(Y.imag), V, th
            )
            slack_p[t] = P[slack] * grid.s_base_mva
            slack_q[t] = Q[slack] * grid.s_base_mva

    return FlowResult(
        bus_ids=[b.id for b in grid.buses],
        branch_ids=[b.id for b in grid.branches],
        branch_kinds=[b.kind for b in grid.branches],
        branch_ratings_mva=[b.rating_mva for b in grid.branches],
        v_pu=v,
        theta_rad=theta,
        p_from_mw=p_from,
        q_from_mvar=q_from,
        loading_percent=loading,
        slack_p_mw=slack_p,
        slack_q_mvar=slack_q,
        converged=converged,
        iterations=iterations,
    )
