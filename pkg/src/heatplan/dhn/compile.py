"""Compiles a HeatSystem into a LinearProgram.

Variable layout, one block builder per technology family, the annual-cost
objective, and nodal energy balances. Dispatch symbols are heat-side MW
unless noted; storage levels are MWh.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..heatsys.model import (
    CHP_KINDS,
    FUEL_CARRIER,
    HeatSystem,
    TechnologyAsset,
    ValidationError,
)
from ..heatsys.physics import annuity_factor
from ..lp.problem import LinearProgram


@dataclass
class CompileOptions:
    pipeline_loss_per_m: float = 1e-7  # fraction lost per metre
    pipeline_max_capacity_mw: float = 250.0
    ates_standing_loss: float = 1.0 - math.exp(-1.0 / 24.0)  # per hour
    ates_discharge_efficiency: float = 0.7  # round-trip applied wholly on discharge
    ates_charge_efficiency: float = 1.0
    tes_standing_loss: float = 0.0
    tes_charge_efficiency: float = 0.99
    tes_discharge_efficiency: float = 0.99


@dataclass
class CapacityEntry:
    asset_id: str
    node: str
    kind: str
    var: int
    potential: float
    norm_scale: float  # finite normalization denominator for MGA objectives


@dataclass
class VariableLayout:
    """Bijection between model entities and LP variable indices."""

    capacity: dict[str, int] = field(default_factory=dict)  # asset id -> var
    dispatch: dict[str, dict[str, list[int]]] = field(default_factory=dict)
    capacity_entries: list[CapacityEntry] = field(default_factory=list)
    cost_coefficients: dict[int, float] = field(default_factory=dict)
    capex_coefficients: dict[int, float] = field(default_factory=dict)
    revenue_coefficients: dict[int, float] = field(default_factory=dict)

    def dispatch_series(self, asset_id: str, name: str, x) -> np.ndarray:
        return np.array([x[i] for i in self.dispatch[asset_id][name]])


class DhnCompiler:
    def __init__(self, system: HeatSystem, options: CompileOptions | None = None):
        self.system = system
        self.options = options or CompileOptions()
        self.lp = LinearProgram()
        self.layout = VariableLayout()
        self.T = len(system.snapshots)
        self.w = system.snapshots.weights
        self.cop = system.cop_series()
        # per (node, t) accumulated balance terms: var -> coefficient
        self.balance: dict[str, list[dict[int, float]]] = {
            nd.id: [dict() for _ in range(self.T)] for nd in system.nodes
        }
        # total peak demand as a finite fallback normalization scale
        peak = sum(float(np.max(nd.demand)) for nd in system.nodes)
        self.default_norm = max(peak, 1.0)

    # -- helpers --------------------------------------------------------

    def _fuel_price(self, asset: TechnologyAsset) -> np.ndarray:
        """Per-snapshot cost of one MWh of the asset's input carrier."""
        carrier = FUEL_CARRIER.get(asset.kind)
        price = (
            self.system.prices.series(carrier).astype(float)
            if carrier
            else np.zeros(self.T)
        )
        extra = asset.variable_cost
        if extra is not None:
            price = price + (extra if np.ndim(extra) else float(extra))
        return price

    def _add_capacity(self, asset: TechnologyAsset, upper: float | None = None) -> int:
        pot = asset.potential_capacity
        if upper is not None:
            pot = min(pot, upper)
        var = self.lp.add_variable(f"{asset.id}.cap", 0.0, pot)
        self.layout.capacity[asset.id] = var
        norm = pot if math.isfinite(pot) and pot > 0 else self.default_norm
        self.layout.capacity_entries.append(
            CapacityEntry(asset.id, asset.node, asset.kind, var, pot, norm)
        )
        length = asset.length if asset.kind == "pipeline" else None
        invest = asset.investment_cost * (length if length else 1.0)
        if invest > 0:
            coeff = invest / annuity_factor(asset.lifetime, self.system.discount_rate)
            self.layout.capex_coefficients[var] = coeff
        return var

    def _add_series(self, asset_id: str, name: str, upper=None) -> list[int]:
        vars_ = [
            self.lp.add_variable(f"{asset_id}.{name}.{t}", 0.0, math.inf) for t in range(self.T)
        ]
        self.layout.dispatch.setdefault(asset_id, {})[name] = vars_
        return vars_

    def _cap_limit(self, vars_: list[int], cap: int, scale=None, name=""):
        """vars_[t] <= scale_t * cap for every snapshot."""
        for t, v in enumerate(vars_):
            s = 1.0 if scale is None else float(scale[t])
            self.lp.add_constraint({v: 1.0, cap: -s}, "<=", 0.0, name=f"{name}.{t}")

    def _opex(self, var: int, cost: float):
        if cost:
            self.layout.cost_coefficients[var] = self.layout.cost_coefficients.get(var, 0.0) + cost

    def _balance_add(self, node: str, t: int, var: int, coeff: float):
        terms = self.balance[node][t]
        terms[var] = terms.get(var, 0.0) + coeff

    # -- technology blocks ----------------------------------------------

    def build_converter(self, asset: TechnologyAsset):
        """Boilers, waste-to-energy, heat pumps: heat = efficiency * input."""
        if asset.kind == "heat_pump":
            eff = self.cop
        else:
            if asset.efficiency is None:
                raise ValidationError(f"asset {asset.id}: converter requires an efficiency")
            eff = np.full(self.T, asset.efficiency)
        cap = self._add_capacity(asset)
        heat = self._add_series(asset.id, "heat")
        self._cap_limit(heat, cap, name=f"{asset.id}.cap_limit")
        price = self._fuel_price(asset)
        for t, v in enumerate(heat):
            self._opex(v, self.w[t] * price[t] / eff[t])
            self._balance_add(asset.node, t, v, 1.0)

    def build_chp(self, asset: TechnologyAsset):
        """Back-pressure CHP: fixed electricity/heat output ratio on fuel input."""
        eh, ee = asset.efficiency_heat, asset.efficiency_elec
        cap = self._add_capacity(asset)
        fuel = self._add_series(asset.id, "fuel")
        # heat output eh*fuel <= heat capacity
        for t, v in enumerate(fuel):
            self.lp.add_constraint({v: eh, cap: -1.0}, "<=", 0.0, name=f"{asset.id}.cap_limit.{t}")
        price = self._fuel_price(asset)
        lam = self.system.prices.electricity
        for t, v in enumerate(fuel):
            self._opex(v, self.w[t] * price[t])
            self.layout.revenue_coefficients[v] = self.w[t] * lam[t] * ee
            self._balance_add(asset.node, t, v, eh)

    def build_availability_generator(self, asset: TechnologyAsset):
        """Solar thermal / residual heat: dispatch <= availability * capacity."""
        if asset.availability is not None:
            avail = asset.availability
        elif asset.kind == "solar_thermal":
            avail = self.system.weather.solar_thermal_cf
        else:
            raise ValidationError(f"asset {asset.id}: availability series required")
        cap = self._add_capacity(asset)
        gen = self._add_series(asset.id, "gen")
        self._cap_limit(gen, cap, scale=avail, name=f"{asset.id}.avail")
        price = self._fuel_price(asset)
        for t, v in enumerate(gen):
            self._opex(v, self.w[t] * price[t])
            self._balance_add(asset.node, t, v, 1.0)

    def _booster_ratio(self, asset: TechnologyAsset) -> np.ndarray:
        if asset.spf is None:
            raise ValidationError(f"asset {asset.id}: SPF required")
        margin = asset.spf - self.cop
        bad = np.where(margin <= 0)[0]
        if bad.size:
            raise ValidationError(
                f"asset {asset.id}: SPF={asset.spf} <= COP={self.cop[bad[0]]:.4g} "
                f"at snapshot {bad[0]} (singular booster coupling)"
            )
        return self.cop / margin

    def build_geothermal(self, asset: TechnologyAsset):
        """Well + booster heat pump with fixed proportional coupling."""
        ratio = self._booster_ratio(asset)
        cap = self._add_capacity(asset)
        qinit = self._add_series(asset.id, "qinit")
        qboost = self._add_series(asset.id, "qboost")
        qfinal = self._add_series(asset.id, "qfinal")
        avail = asset.availability
        self._cap_limit(qfinal, cap, scale=avail, name=f"{asset.id}.cap_limit")
        lam = self.system.prices.electricity
        price = self._fuel_price(asset)  # optional well variable cost
        for t in range(self.T):
            self.lp.add_constraint(
                {qfinal[t]: 1.0, qinit[t]: -1.0, qboost[t]: -1.0},
                "=",
                0.0,
                name=f"{asset.id}.split.{t}",
            )
            self.lp.add_constraint(
                {qboost[t]: 1.0, qinit[t]: -ratio[t]}, "=", 0.0, name=f"{asset.id}.couple.{t}"
            )
            self._opex(qinit[t], self.w[t] * price[t])
            self._opex(qboost[t], self.w[t] * lam[t] / self.cop[t])  # booster electricity
            self._balance_add(asset.node, t, qfinal[t], 1.0)

    def build_ht_ates(self, asset: TechnologyAsset):
        """Seasonal store with booster-upgraded discharge, cyclic over the horizon."""
        opt = self.options
        ratio = self._booster_ratio(asset)
        eta_c = opt.ates_charge_efficiency
        eta_d = (
            asset.efficiency if asset.efficiency is not None else opt.ates_discharge_efficiency
        )
        cap = self._add_capacity(asset)  # discharge power MW
        level = self._add_series(asset.id, "level")
        qchg = self._add_series(asset.id, "qchg")
        qdis = self._add_series(asset.id, "qdis")
        qboost = self._add_series(asset.id, "qboost")
        qfinal = self._add_series(asset.id, "qfinal")
        self._cap_limit(qchg, cap, name=f"{asset.id}.chg_limit")
        self._cap_limit(qfinal, cap, name=f"{asset.id}.dis_limit")
        if asset.h_max:
            for t in range(self.T):
                self.lp.add_constraint(
                    {level[t]: 1.0, cap: -asset.h_max}, "<=", 0.0, name=f"{asset.id}.energy.{t}"
                )
        lam = self.system.prices.electricity
        for t in range(self.T):
            decay = (1.0 - opt.ates_standing_loss) ** self.w[t]
            prev = level[(t - 1) % self.T]  # cyclic level balance
            self.lp.add_constraint(
                {
                    level[t]: 1.0,
                    prev: -decay,
                    qchg[t]: -eta_c * self.w[t],
                    qdis[t]: self.w[t] / eta_d,
                },
                "=",
                0.0,
                name=f"{asset.id}.level.{t}",
            )
            self.lp.add_constraint(
                {qfinal[t]: 1.0, qdis[t]: -1.0, qboost[t]: -1.0},
                "=",
                0.0,
                name=f"{asset.id}.split.{t}",
            )
            self.lp.add_constraint(
                {qboost[t]: 1.0, qdis[t]: -ratio[t]}, "=", 0.0, name=f"{asset.id}.couple.{t}"
            )
            self._opex(qboost[t], self.w[t] * lam[t] / self.cop[t])
            self._balance_add(asset.node, t, qfinal[t], 1.0)
            self._balance_add(asset.node, t, qchg[t], -1.0)

    def build_tes(self, asset: TechnologyAsset):
        """Short-term tank storage; energy capacity locked to h_max * power."""
        opt = self.options
        eta_c = opt.tes_charge_efficiency
        eta_d = opt.tes_discharge_efficiency
        cap = self._add_capacity(asset)  # discharge power MW
        level = self._add_series(asset.id, "level")
        chg = self._add_series(asset.id, "chg")
        dis = self._add_series(asset.id, "dis")
        self._cap_limit(chg, cap, name=f"{asset.id}.chg_limit")
        self._cap_limit(dis, cap, name=f"{asset.id}.dis_limit")
        for t in range(self.T):
            self.lp.add_constraint(
                {level[t]: 1.0, cap: -asset.h_max}, "<=", 0.0, name=f"{asset.id}.energy.{t}"
            )
            decay = (1.0 - opt.tes_standing_loss) ** self.w[t]
            prev = level[(t - 1) % self.T]
            self.lp.add_constraint(
                {
                    level[t]: 1.0,
                    prev: -decay,
                    chg[t]: -eta_c * self.w[t],
                    dis[t]: self.w[t] / eta_d,
                },
                "=",
                0.0,
                name=f"{asset.id}.level.{t}",
            )
            self._balance_add(asset.node, t, dis[t], 1.0)
            self._balance_add(asset.node, t, chg[t], -1.0)

    def build_pipeline(self, asset: TechnologyAsset):
        """Bidirectional link with length-proportional losses."""
        loss = self.options.pipeline_loss_per_m * (asset.length or 0.0)
        if loss >= 1.0:
            raise ValidationError(
                f"asset {asset.id}: pipeline losses {loss:.3f} >= 1 over length {asset.length} m"
            )
        eff = 1.0 - loss
        cap = self._add_capacity(asset, upper=self.options.pipeline_max_capacity_mw)
        fwd = self._add_series(asset.id, "fwd")
        bwd = self._add_series(asset.id, "bwd")
        self._cap_limit(fwd, cap, name=f"{asset.id}.fwd_limit")
        self._cap_limit(bwd, cap, name=f"{asset.id}.bwd_limit")
        a, b = asset.node, asset.node_b
        for t in range(self.T):
            self._balance_add(a, t, fwd[t], -1.0)
            self._balance_add(b, t, fwd[t], eff)
            self._balance_add(b, t, bwd[t], -1.0)
            self._balance_add(a, t, bwd[t], eff)

    # -- assembly -------------------------------------------------------

    _BUILDERS = {
        "electric_boiler": build_converter,
        "gas_boiler_greengas": build_converter,
        "gas_boiler_hydrogen": build_converter,
        "waste_to_energy": build_converter,
        "heat_pump": build_converter,
        "chp_greengas": build_chp,
        "chp_hydrogen": build_chp,
        "solar_thermal": build_availability_generator,
        "residual_heat": build_availability_generator,
        "geothermal": build_geothermal,
        "ht_ates": build_ht_ates,
        "tes_short_term": build_tes,
        "pipeline": build_pipeline,
    }

    def build_energy_balance(self):
        """Equality balance at every (node, snapshot); demand on the rhs."""
        supplied = {a.node for a in self.system.assets}
        supplied |= {a.node_b for a in self.system.assets if a.node_b}
        for nd in self.system.nodes:
            if np.max(nd.demand) > 0 and nd.id not in supplied:
                raise ValidationError(
                    f"node {nd.id}: demand but no connectable supply path (infeasible)"
                )
        for nd in self.system.nodes:
            for t in range(self.T):
                terms = self.balance[nd.id][t]
                if not terms and nd.demand[t] > 0:
                    raise ValidationError(
                        f"node {nd.id} snapshot {t}: demand {nd.demand[t]} with no supply terms"
                    )
                if terms:
                    self.lp.add_constraint(
                        terms, "=", float(nd.demand[t]), name=f"balance.{nd.id}.{t}"
                    )

    def build_objective(self):
        obj: dict[int, float] = {}
        for var, c in self.layout.capex_coefficients.items():
            obj[var] = obj.get(var, 0.0) + c
        for var, c in self.layout.cost_coefficients.items():
            obj[var] = obj.get(var, 0.0) + c
        for var, c in self.layout.revenue_coefficients.items():
            obj[var] = obj.get(var, 0.0) - c
        # zero-cost variables still need an objective entry set of at least one var
        if not obj:
            obj = {0: 0.0} if self.lp.num_variables else obj
        self.lp.set_objective(obj)

    def compile(self) -> tuple[LinearProgram, VariableLayout]:
        for asset in sorted(self.system.assets, key=lambda a: a.id):
            builder = self._BUILDERS.get(asset.kind)
            if builder is None:
                raise ValidationError(f"asset {asset.id}: no builder for kind {asset.kind}")
            builder(self, asset)
        self.build_energy_balance()
        self.build_objective()
        # variable groups per technology kind for MGA objective rewrites
        by_kind: dict[str, list[int]] = {}
        for e in self.layout.capacity_entries:
            by_kind.setdefault(e.kind, []).append(e.var)
        for kind, vars_ in by_kind.items():
            self.lp.add_group(f"kind:{kind}", vars_)
        return self.lp, self.layout


def compile_system(
    system: HeatSystem, options: CompileOptions | None = None
) -> tuple[LinearProgram, VariableLayout]:
    return DhnCompiler(system, options).compile()
