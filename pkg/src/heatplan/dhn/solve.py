"""Least-cost solve and extraction of the solved design."""

from __future__ import annotations

import numpy as np

from ..heatsys.model import CHP_KINDS, ELECTRIC_CONSUMER_KINDS, HeatSystem, ValidationError
from ..lp.problem import LinearProgram
from ..lp.solve import solve
from .compile import CompileOptions, VariableLayout, compile_system
from .result import DesignResult


class InfeasibleSystemError(RuntimeError):
    pass


def extract_design(
    system: HeatSystem, layout: VariableLayout, x: np.ndarray, objective: float
) -> DesignResult:
    capacities = {aid: float(x[var]) for aid, var in layout.capacity.items()}
    dispatch = {
        aid: {name: [float(x[i]) for i in idxs] for name, idxs in series.items()}
        for aid, series in layout.dispatch.items()
    }
    capex = sum(c * x[v] for v, c in layout.capex_coefficients.items())
    opex = sum(c * x[v] for v, c in layout.cost_coefficients.items())
    revenue = sum(c * x[v] for v, c in layout.revenue_coefficients.items())
    result = DesignResult(
        capacities=capacities,
        dispatch=dispatch,
        cost_capex=float(capex),
        cost_opex=float(opex),
        cost_chp_revenue=float(revenue),
        objective=float(objective),
    )
    extract_electric_profiles(system, result)
    result.metadata["kinds"] = {a.id: a.kind for a in system.assets}
    result.metadata["nodes"] = {a.id: a.node for a in system.assets}
    return result


def extract_electric_profiles(system: HeatSystem, result: DesignResult) -> None:
    """Per grid bus: MW drawn (boilers, heat pumps, boosters) and generated (CHP)."""
    T = len(system.snapshots)
    cop = system.cop_series()
    load: dict[str, np.ndarray] = {}
    gen: dict[str, np.ndarray] = {}

    def bus_of(asset) -> str:
        bus = system.bus_map.get(asset.node)
        if bus is None:
            raise ValidationError(
                f"asset {asset.id}: node {asset.node} has electric assets but no bus mapping"
            )
        return bus

    for asset in system.assets:
        series = result.dispatch.get(asset.id)
        if not series:
            continue
        if asset.kind in ELECTRIC_CONSUMER_KINDS:
            if asset.kind == "electric_boiler":
                draw = np.array(series["heat"]) / asset.efficiency
            elif asset.kind == "heat_pump":
                draw = np.array(series["heat"]) / cop
            else:  # geothermal / ht_ates booster heat pump
                draw = np.array(series["qboost"]) / cop
            if np.max(draw, initial=0.0) <= 0:
                continue
            bus = bus_of(asset)
            load.setdefault(bus, np.zeros(T))
            load[bus] += draw
        elif asset.kind in CHP_KINDS:
            out = np.array(series["fuel"]) * asset.efficiency_elec
            if np.max(out, initial=0.0) <= 0:
                continue
            bus = bus_of(asset)
            gen.setdefault(bus, np.zeros(T))
            gen[bus] += out

    result.electric_load = {b: v.tolist() for b, v in load.items()}
    result.electric_gen = {b: v.tolist() for b, v in gen.items()}


def solve_least_cost(
    system: HeatSystem, options: CompileOptions | None = None
) -> tuple[DesignResult, LinearProgram, VariableLayout]:
    lp, layout = compile_system(system, options)
    sol = solve(lp)
    if sol.status != "optimal":
        raise InfeasibleSystemError(f"least-cost solve returned status {sol.status}")
    lp.metadata["optimal_cost"] = sol.objective
    result = extract_design(system, layout, sol.x, sol.objective)
    audit_design(system, layout, sol.x, sol.objective)
    return result, lp, layout


def audit_design(
    system: HeatSystem,
    layout: VariableLayout,
    x: np.ndarray,
    objective: float,
    *,
    balance_tol: float = 1e-4,
    rel_tol: float = 1e-6,
) -> None:
    """Independent re-checks of a solved design from raw inputs.

    Covers nodal balance, capacity limits, booster coupling ratios, and
    objective reconstruction; raises AssertionError on violation.
    """
    cop = system.cop_series()
    T = len(system.snapshots)

    # nodal balance re-evaluated from dispatch
    supply = {nd.id: np.zeros(T) for nd in system.nodes}
    from .compile import DhnCompiler  # reuse balance assembly rules

    comp = DhnCompiler(system)
    comp.compile()
    for nd in system.nodes:
        for t in range(T):
            lhs = sum(c * x[v] for v, c in comp.balance[nd.id][t].items())
            assert abs(lhs - nd.demand[t]) <= balance_tol, (
                f"balance violated at node {nd.id}, snapshot {t}: {lhs} vs {nd.demand[t]}"
            )
    del supply

    # capacity and coupling audits
    for asset in system.assets:
        series = layout.dispatch.get(asset.id)
        if not series:
            continue
        cap = x[layout.capacity[asset.id]]
        if asset.kind == "geothermal":
            flows = ("qinit", "qfinal")
        elif asset.kind == "ht_ates":
            flows = ("qfinal",)
        elif asset.kind in CHP_KINDS:
            flows = ()
            heat = np.array([x[i] for i in series["fuel"]]) * asset.efficiency_heat
            assert np.all(heat <= cap + 1e-6), f"{asset.id}: heat output exceeds capacity"
        else:
            flows = tuple(k for k in ("heat", "gen", "fwd", "bwd", "dis") if k in series)
        for name in flows:
            vals = np.array([x[i] for i in series[name]])
            avail = asset.availability
            limit = cap * (avail if avail is not None and name in ("gen",) else 1.0)
            assert np.all(vals <= np.asarray(limit) + 1e-6), (
                f"{asset.id}.{name}: dispatch exceeds capacity"
            )
        if asset.kind in ("geothermal", "ht_ates"):
            base = "qinit" if asset.kind == "geothermal" else "qdis"
            qb = np.array([x[i] for i in series["qboost"]])
            qx = np.array([x[i] for i in series[base]])
            qf = np.array([x[i] for i in series["qfinal"]])
            ratio = cop / (asset.spf - cop)
            mask = qx > 1e-6
            assert np.allclose(qb[mask] / qx[mask], ratio[mask], rtol=rel_tol, atol=1e-9), (
                f"{asset.id}: booster coupling ratio violated"
            )
            # final heat equals SPF * booster / COP wherever the booster runs
            mask = qb > 1e-6
            assert np.allclose(
                qf[mask], asset.spf * qb[mask] / cop[mask], rtol=rel_tol, atol=1e-6
            ), f"{asset.id}: SPF relation violated"

    # objective reconstruction from raw coefficient data
    capex = sum(c * x[v] for v, c in layout.capex_coefficients.items())
    opex = sum(c * x[v] for v, c in layout.cost_coefficients.items())
    revenue = sum(c * x[v] for v, c in layout.revenue_coefficients.items())
    recon = capex + opex - revenue
    scale = max(1.0, abs(objective))
    assert abs(recon - objective) <= rel_tol * scale, (
        f"objective reconstruction off: {recon} vs {objective}"
    )
