"""Domain model of the district-heating system.

All types are validated on construction and treated as immutable afterwards,
so a HeatSystem can be shared read-only across concurrent workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TECHNOLOGY_KINDS = frozenset(
    {
        "heat_pump",
        "electric_boiler",
        "gas_boiler_greengas",
        "gas_boiler_hydrogen",
        "chp_greengas",
        "chp_hydrogen",
        "geothermal",
        "solar_thermal",
        "residual_heat",
        "waste_to_energy",
        "tes_short_term",
        "ht_ates",
        "pipeline",
    }
)

# kinds whose dispatch draws electricity from the grid bus of their node
ELECTRIC_CONSUMER_KINDS = frozenset({"heat_pump", "electric_boiler", "geothermal", "ht_ates"})
CHP_KINDS = frozenset({"chp_greengas", "chp_hydrogen"})
GAS_KINDS = frozenset({"gas_boiler_greengas", "gas_boiler_hydrogen", "chp_greengas", "chp_hydrogen"})
P2H_KINDS = frozenset({"heat_pump", "electric_boiler"})
NON_DISPATCHABLE_KINDS = frozenset({"geothermal", "solar_thermal", "residual_heat"})
STORAGE_KINDS = frozenset({"tes_short_term", "ht_ates"})

FUEL_CARRIER = {
    "electric_boiler": "electricity",
    "heat_pump": "electricity",
    "gas_boiler_greengas": "green_gas",
    "gas_boiler_hydrogen": "hydrogen",
    "chp_greengas": "green_gas",
    "chp_hydrogen": "hydrogen",
    "waste_to_energy": "waste",
    "residual_heat": "residual_heat",
}


class ValidationError(ValueError):
    """Input data violates a model invariant; message carries the record locus."""


@dataclass(frozen=True)
class SnapshotIndex:
    timestamps: tuple[str, ...]
    weights: np.ndarray  # hours represented by each snapshot

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        if len(self.timestamps) != len(w):
            raise ValidationError("snapshot timestamps and weights differ in length")
        if not np.all(w > 0):
            raise ValidationError("snapshot weights must be strictly positive")

    def __len__(self) -> int:
        return len(self.timestamps)

    @property
    def horizon_hours(self) -> float:
        return float(self.weights.sum())


@dataclass(frozen=True)
class HeatNode:
    id: str
    demand: np.ndarray  # MW_th per snapshot
    electric_bus_ref: str | None = None

    def __post_init__(self):
        d = np.asarray(self.demand, dtype=float)
        object.__setattr__(self, "demand", d)
        if np.any(d < 0) or not np.all(np.isfinite(d)):
            raise ValidationError(f"node {self.id}: demand must be finite and non-negative")


@dataclass(frozen=True)
class TechnologyAsset:
    id: str
    node: str
    kind: str
    investment_cost: float = 0.0  # EUR/MW (EUR/MW/m for pipelines)
    lifetime: float = 15.0  # years
    variable_cost: float | np.ndarray | None = None  # EUR/MWh fuel or electricity
    efficiency: float | None = None
    efficiency_elec: float | None = None
    efficiency_heat: float | None = None
    spf: float | None = None  # seasonal performance factor
    potential_capacity: float = float("inf")  # MW
    availability: np.ndarray | None = None  # in [0, 1] per snapshot
    length: float | None = None  # m, pipelines
    h_max: float | None = None  # h, discharge duration of stores
    node_b: str | None = None  # pipelines: second endpoint

    def __post_init__(self):
        loc = f"asset {self.id}"
        if self.kind not in TECHNOLOGY_KINDS:
            raise ValidationError(f"{loc}: unknown technology kind {self.kind!r}")
        if self.investment_cost < 0:
            raise ValidationError(f"{loc}: investment_cost must be >= 0")
        if self.lifetime < 1:
            raise ValidationError(f"{loc}: lifetime must be >= 1 year")
        for name in ("efficiency", "efficiency_elec", "efficiency_heat"):
            v = getattr(self, name)
            if v is not None and not (0 < v <= 1):
                raise ValidationError(f"{loc}: {name}={v} outside (0, 1]")
        if self.spf is not None and self.spf <= 0:
            raise ValidationError(f"{loc}: SPF must be > 0")
        if self.potential_capacity < 0:
            raise ValidationError(f"{loc}: potential_capacity must be >= 0")
        if self.availability is not None:
            a = np.asarray(self.availability, dtype=float)
            object.__setattr__(self, "availability", a)
            if np.any(a < 0) or np.any(a > 1):
                raise ValidationError(f"{loc}: availability values outside [0, 1]")
        if self.kind == "pipeline":
            if self.length is None or self.length < 0:
                raise ValidationError(f"{loc}: pipeline requires a non-negative length")
            if self.node_b is None:
                raise ValidationError(f"{loc}: pipeline requires a second endpoint node_b")
        if self.kind == "tes_short_term" and (self.h_max is None or self.h_max <= 0):
            raise ValidationError(f"{loc}: short-term storage requires h_max > 0")
        if self.kind in CHP_KINDS:
            eh = self.efficiency_heat or 0.0
            ee = self.efficiency_elec or 0.0
            if eh <= 0 or ee <= 0:
                raise ValidationError(f"{loc}: CHP requires efficiency_heat and efficiency_elec")
            if eh + ee > 1:
                raise ValidationError(f"{loc}: CHP efficiencies sum to {eh + ee} > 1")


@dataclass(frozen=True)
class CarrierPrices:
    electricity: np.ndarray  # EUR/MWh per snapshot
    hydrogen: np.ndarray
    green_gas: np.ndarray
    waste: np.ndarray
    residual_heat: np.ndarray

    def series(self, carrier: str) -> np.ndarray:
        return getattr(self, carrier)

    def __post_init__(self):
        n = len(np.asarray(self.electricity))
        for name in ("electricity", "hydrogen", "green_gas", "waste", "residual_heat"):
            s = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, s)
            if len(s) != n:
                raise ValidationError(f"price series {name}: length {len(s)} != {n}")
            if not np.all(np.isfinite(s)):
                raise ValidationError(f"price series {name}: non-finite values")


@dataclass(frozen=True)
class WeatherInputs:
    ambient_temperature: np.ndarray  # degC per snapshot
    solar_thermal_cf: np.ndarray  # capacity factor in [0, 1]
    sink_temperature: float = 80.0  # degC network supply temperature

    def __post_init__(self):
        t = np.asarray(self.ambient_temperature, dtype=float)
        cf = np.asarray(self.solar_thermal_cf, dtype=float)
        object.__setattr__(self, "ambient_temperature", t)
        object.__setattr__(self, "solar_thermal_cf", cf)
        if len(t) != len(cf):
            raise ValidationError("ambient_temperature and solar_thermal_cf lengths differ")
        if np.any(cf < 0) or np.any(cf > 1):
            raise ValidationError("solar_thermal_cf outside [0, 1]")


@dataclass(frozen=True)
class HeatSystem:
    snapshots: SnapshotIndex
    nodes: tuple[HeatNode, ...]
    assets: tuple[TechnologyAsset, ...]
    prices: CarrierPrices
    weather: WeatherInputs
    bus_map: dict[str, str] = field(default_factory=dict)  # heat node id -> grid bus id
    discount_rate: float = 0.07
    cop_coefficients: tuple[float, float, float] = (6.81, 0.121, 0.000630)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.snapshots)
        node_ids = {nd.id for nd in self.nodes}
        if len(node_ids) != len(self.nodes):
            raise ValidationError("duplicate heat node ids")
        for nd in self.nodes:
            if len(nd.demand) != n:
                raise ValidationError(
                    f"node {nd.id}: demand series length {len(nd.demand)} != {n} snapshots"
                )
        asset_ids = set()
        for a in self.assets:
            if a.id in asset_ids:
                raise ValidationError(f"duplicate asset id {a.id}")
            asset_ids.add(a.id)
            if a.node not in node_ids:
                raise ValidationError(f"asset {a.id}: unknown node {a.node!r}")
            if a.node_b is not None and a.node_b not in node_ids:
                raise ValidationError(f"asset {a.id}: unknown node_b {a.node_b!r}")
            if a.availability is not None and len(a.availability) != n:
                raise ValidationError(
                    f"asset {a.id}: availability length {len(a.availability)} != {n} snapshots"
                )
            if isinstance(a.variable_cost, np.ndarray) and len(a.variable_cost) != n:
                raise ValidationError(f"asset {a.id}: variable_cost series length != {n}")
        for series in (self.prices.electricity, self.weather.ambient_temperature):
            if len(series) != n:
                raise ValidationError("carrier price / weather series length != snapshot count")
        for hn, bus in self.bus_map.items():
            if hn not in node_ids:
                raise ValidationError(f"bus_map: unknown heat node {hn!r}")
        if self.discount_rate < 0:
            raise ValidationError("discount rate must be >= 0")

    def node(self, node_id: str) -> HeatNode:
        for nd in self.nodes:
            if nd.id == node_id:
                return nd
        raise KeyError(node_id)

    def require_bus(self, node_id: str) -> str:
        """Grid bus for a heat node; raises when coupling is enabled but unmapped."""
        if node_id not in self.bus_map:
            raise ValidationError(f"heat node {node_id} has electric assets but no grid bus mapping")
        return self.bus_map[node_id]

    def cop_series(self) -> np.ndarray:
        from .physics import heat_pump_cop

        delta_t = self.weather.sink_temperature - self.weather.ambient_temperature
        return heat_pump_cop(delta_t, self.cop_coefficients)
