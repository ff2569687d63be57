"""Ingestion of heat-system definition directories and scenario files.

Directory layout (comma-separated UTF-8 text with header rows):

    nodes.csv                id, demand_series, electric_bus
    assets.csv               id, node, kind, ... (see ASSET_COLUMNS)
    bus_map.csv              heat_node, grid_bus
    series/<name>.csv        timestamp (ISO-8601 hourly), value

Carrier prices and weather come from well-known series names
(electricity_price, hydrogen_price, green_gas_price, waste_price,
residual_heat_price, ambient_temperature, solar_thermal_cf). A weather-year
variant `y` selects `<name>__<y>.csv` when present.
"""

from __future__ import annotations

import csv

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .model import (
    CarrierPrices,
    HeatNode,
    HeatSystem,
    SnapshotIndex,
    TechnologyAsset,
    ValidationError,
    WeatherInputs,
)

CARRIER_SERIES = {
    "electricity": "electricity_price",
    "hydrogen": "hydrogen_price",
    "green_gas": "green_gas_price",
    "waste": "waste_price",
    "residual_heat": "residual_heat_price",
}

ASSET_COLUMNS = (
    "id",
    "node",
    "kind",
    "investment_cost",
    "lifetime",
    "variable_cost",
    "variable_cost_series",
    "efficiency",
    "efficiency_elec",
    "efficiency_heat",
    "spf",
    "potential_capacity",
    "availability_series",
    "length_m",
    "h_max",
    "node_b",
)


def _read_csv(path: Path) -> list[dict[str, str]]:
    if not path.exists():
        raise ValidationError(f"missing file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def _read_series(path: Path) -> tuple[list[str], np.ndarray]:
    rows = _read_csv(path)
    if not rows:
        raise ValidationError(f"{path}: empty series file")
    cols = list(rows[0].keys())
    ts_col, val_col = cols[0], cols[1]
    try:
        values = np.array([float(r[val_col]) for r in rows])
    except ValueError as exc:
        raise ValidationError(f"{path}: non-numeric value ({exc})") from exc
    return [r[ts_col] for r in rows], values


class SeriesStore:
    """Lazily loads named series from a system's series/ directory."""

    def __init__(self, root: Path, weather_year: str = "default"):
        self.root = root
        self.weather_year = weather_year
        self._cache: dict[str, tuple[list[str], np.ndarray]] = {}

    def path_for(self, name: str) -> Path:
        if self.weather_year != "default":
            variant = self.root / f"{name}__{self.weather_year}.csv"
            if variant.exists():
                return variant
        return self.root / f"{name}.csv"

    def get(self, name: str) -> tuple[list[str], np.ndarray]:
        if name not in self._cache:
            self._cache[name] = _read_series(self.path_for(name))
        return self._cache[name]


def _opt_float(row: dict[str, str], key: str, locus: str) -> float | None:
    raw = (row.get(key) or "").strip()
    if not raw:
        return None
    try:
        return float(raw)
    except ValueError as exc:
        raise ValidationError(f"{locus}: field {key}={raw!r} is not a number") from exc


def load_heat_system(
    path: str | Path,
    *,
    weather_year: str = "default",
    demand_scale: float = 1.0,
    discount_rate: float = 0.07,
    sink_temperature: float = 80.0,
    cop_coefficients: tuple[float, float, float] | None = None,
    snapshot_weight: float = 1.0,
) -> HeatSystem:
    """Load and cross-validate a heat-system definition directory.

    snapshot_weight scales every snapshot's contribution to variable cost and
    delivered energy; a representative week uses 8760/168 to stand for a year.
    """
    root = Path(path)
    if not root.is_dir():
        raise ValidationError(f"heat system directory not found: {root}")
    series = SeriesStore(root / "series", weather_year)

    node_rows = _read_csv(root / "nodes.csv")
    snapshots: SnapshotIndex | None = None
    nodes = []
    for row in node_rows:
        locus = f"nodes.csv node {row.get('id')}"
        ts, demand = series.get(row["demand_series"])
        if snapshots is None:
            snapshots = SnapshotIndex(tuple(ts), np.full(len(ts), float(snapshot_weight)))
        elif len(ts) != len(snapshots):
            raise ValidationError(
                f"{locus}: demand series length {len(ts)} != {len(snapshots)} snapshots"
            )
        bus = (row.get("electric_bus") or "").strip() or None
        nodes.append(HeatNode(row["id"], demand * demand_scale, bus))
    if snapshots is None:
        raise ValidationError(f"{root / 'nodes.csv'}: no nodes defined")

    assets = []
    for row in _read_csv(root / "assets.csv"):
        locus = f"assets.csv asset {row.get('id')}"
        variable_cost: float | np.ndarray | None = _opt_float(row, "variable_cost", locus)
        vc_series = (row.get("variable_cost_series") or "").strip()
        if vc_series:
            _, variable_cost = series.get(vc_series)
        availability = None
        av_series = (row.get("availability_series") or "").strip()
        if av_series:
            _, availability = series.get(av_series)
        try:
            asset = TechnologyAsset(
                id=row["id"],
                node=row["node"],
                kind=row["kind"],
                investment_cost=_opt_float(row, "investment_cost", locus) or 0.0,
                lifetime=_opt_float(row, "lifetime", locus) or 15.0,
                variable_cost=variable_cost,
                efficiency=_opt_float(row, "efficiency", locus),
                efficiency_elec=_opt_float(row, "efficiency_elec", locus),
                efficiency_heat=_opt_float(row, "efficiency_heat", locus),
                spf=_opt_float(row, "spf", locus),
                potential_capacity=_opt_float(row, "potential_capacity", locus)
                if (row.get("potential_capacity") or "").strip()
                else float("inf"),
                availability=availability,
                length=_opt_float(row, "length_m", locus),
                h_max=_opt_float(row, "h_max", locus),
                node_b=(row.get("node_b") or "").strip() or None,
            )
        except ValidationError as exc:
            raise ValidationError(f"{locus}: {exc}") from exc
        assets.append(asset)

    bus_map = {}
    bus_map_path = root / "bus_map.csv"
    if bus_map_path.exists():
        for row in _read_csv(bus_map_path):
            bus_map[row["heat_node"]] = row["grid_bus"]

    prices = CarrierPrices(
        **{carrier: series.get(name)[1] for carrier, name in CARRIER_SERIES.items()}
    )
    weather = WeatherInputs(
        ambient_temperature=series.get("ambient_temperature")[1],
        solar_thermal_cf=series.get("solar_thermal_cf")[1],
        sink_temperature=sink_temperature,
    )

    return HeatSystem(
        snapshots=snapshots,
        nodes=tuple(nodes),
        assets=tuple(assets),
        prices=prices,
        weather=weather,
        bus_map=bus_map,
        discount_rate=discount_rate,
        cop_coefficients=tuple(cop_coefficients) if cop_coefficients else (6.81, 0.121, 0.000630),
        metadata={
            "weather_year": weather_year,
            "demand_scale": demand_scale,
            "horizon_hours": float(len(snapshots)),
            "snapshot_weight": float(snapshot_weight),
        },
    )


@dataclass
class ScenarioConfig:
    """Parsed scenario file plus resolved paths."""

    system: Path
    grid: Path
    output: Path
    slack: float = 0.10
    weather_year: str = "default"
    demand_scale: float = 1.0
    discount_rate: float = 0.07
    sink_temperature: float = 80.0
    cop_coefficients: tuple[float, float, float] | None = None
    snapshot_weight: float = 1.0
    spores: dict = field(default_factory=dict)
    powerflow: dict = field(default_factory=dict)
    jobs: int | None = None
    source: Path | None = None

    def __post_init__(self):
        if not (0.0 <= self.slack <= 1.0):
            raise ValidationError(f"slack must be in [0, 1], got {self.slack}")
        if self.demand_scale <= 0:
            raise ValidationError("demand_scale must be > 0")

    def load_system(self) -> HeatSystem:
        return load_heat_system(
            self.system,
            weather_year=self.weather_year,
            demand_scale=self.demand_scale,
            discount_rate=self.discount_rate,
            sink_temperature=self.sink_temperature,
            cop_coefficients=self.cop_coefficients,
            snapshot_weight=self.snapshot_weight,
        )


def load_scenario(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    base = path.parent
    try:
        return ScenarioConfig(
            system=base / raw["system"],
            grid=base / raw["grid"],
            output=base / raw.get("output", "out"),
            slack=float(raw.get("slack", 0.10)),
            weather_year=str(raw.get("weather_year", "default")),
            demand_scale=float(raw.get("demand_scale", 1.0)),
            discount_rate=float(raw.get("discount_rate", 0.07)),
            sink_temperature=float(raw.get("sink_temperature", 80.0)),
            cop_coefficients=tuple(raw["cop_coefficients"]) if "cop_coefficients" in raw else None,
            snapshot_weight=float(raw.get("snapshot_weight", 1.0)),
            spores=dict(raw.get("spores", {})),
            powerflow=dict(raw.get("powerflow", {})),
            jobs=raw.get("jobs"),
            source=path,
        )
    except KeyError as exc:
        raise ValidationError(f"{path}: missing scenario key {exc}") from exc
