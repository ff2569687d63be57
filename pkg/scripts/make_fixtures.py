#!/usr/bin/env python3
"""Regenerates the shipped synthetic fixtures (deterministic, seeded).

toy2:   2-node heat system, 5 assets, 168 snapshots (ingestion tests)
toy5:   5-node heat system covering every technology kind
grid10: 10-bus electric grid with two transformers and distributed PV feed-in

Run from the repo root: python3 scripts/make_fixtures.py
"""

import math
from datetime import datetime, timedelta
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent / "fixtures"
T = 168
T0 = datetime(2050, 1, 4)  # a Monday
RNG = np.random.default_rng(20500104)

timestamps = [(T0 + timedelta(hours=t)).isoformat() for t in range(T)]
hours = np.arange(T)
hod = hours % 24


def daily(peak_hour, width=4.0):
    return np.exp(-0.5 * ((hod - peak_hour) / width) ** 2)


def write_series(path: Path, values, col="value"):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"timestamp,{col}\n")
        for ts, v in zip(timestamps, values):
            fh.write(f"{ts},{v:.6f}\n")


def write_csv(path: Path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(str(x) for x in row) + "\n")


# -- shared weather / prices -------------------------------------------

ambient = 4.0 + 4.0 * np.sin(2 * math.pi * (hod - 14) / 24) + RNG.normal(0, 0.8, T)
ambient_warm = ambient + 8.0
ambient_cold = ambient - 6.0
solar_cf = np.clip(np.where((hod >= 5) & (hod <= 20), np.sin(math.pi * (hod - 5) / 15), 0.0), 0, 1)
solar_cf = solar_cf * (0.75 + 0.25 * np.sin(2 * math.pi * hours / T))
solar_cf_warm = np.clip(solar_cf * 1.25, 0, 1)
solar_cf_cold = solar_cf * 0.5

# duck-curve electricity price: cheap around midday, expensive evenings
elec_price = 70 - 45 * daily(13, 3.5) + 35 * daily(19, 2.0) + RNG.normal(0, 3, T)
h2_price = np.full(T, 95.0)
gg_price = np.full(T, 52.0)
waste_price = np.full(T, 6.0)
rh_price = np.full(T, 12.0)

residual_avail = np.clip(
    np.where((hod >= 6) & (hod <= 22), 0.9, 0.4) + RNG.normal(0, 0.05, T), 0, 1
)


def demand(peak, base_frac=0.45):
    shape = base_frac + (1 - base_frac) * (
        0.55 * daily(7, 2.5) + 0.75 * daily(19, 3.0) + 0.25 * (1 - (ambient - ambient.min()) / 12)
    )
    return np.clip(peak * shape / shape.max(), 0.05 * peak, None)


def write_common_series(d: Path, variants=False):
    write_series(d / "electricity_price.csv", elec_price)
    write_series(d / "hydrogen_price.csv", h2_price)
    write_series(d / "green_gas_price.csv", gg_price)
    write_series(d / "waste_price.csv", waste_price)
    write_series(d / "residual_heat_price.csv", rh_price)
    write_series(d / "ambient_temperature.csv", ambient)
    write_series(d / "solar_thermal_cf.csv", solar_cf)
    write_series(d / "residual_availability.csv", residual_avail)
    if variants:
        write_series(d / "ambient_temperature__warm.csv", ambient_warm)
        write_series(d / "ambient_temperature__cold.csv", ambient_cold)
        write_series(d / "solar_thermal_cf__warm.csv", solar_cf_warm)
        write_series(d / "solar_thermal_cf__cold.csv", solar_cf_cold)


ASSET_HEADER = [
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
]


def asset(id, node, kind, invest, life, **kw):
    row = {h: "" for h in ASSET_HEADER}
    row.update(id=id, node=node, kind=kind, investment_cost=invest, lifetime=life, **kw)
    return [row[h] for h in ASSET_HEADER]


# -- toy2 ---------------------------------------------------------------

d = ROOT / "toy2"
write_common_series(d / "series")
write_series(d / "series" / "demand_a.csv", demand(12))
write_series(d / "series" / "demand_b.csv", demand(8))
write_csv(
    d / "nodes.csv",
    ["id", "demand_series", "electric_bus"],
    [["a", "demand_a", "b4"], ["b", "demand_b", "b5"]],
)
write_csv(
    d / "assets.csv",
    ASSET_HEADER,
    [
        asset("gb_a", "a", "gas_boiler_greengas", 200000, 15, efficiency=0.8, potential_capacity=30),
        asset("eb_a", "a", "electric_boiler", 305000, 15, efficiency=0.9, potential_capacity=25),
        asset("hp_b", "b", "heat_pump", 2039000, 15, potential_capacity=15),
        asset("tes_b", "b", "tes_short_term", 250000, 30, potential_capacity=10, h_max=6),
        asset("pipe_ab", "a", "pipeline", 100, 30, length_m=5000, potential_capacity=100, node_b="b"),
    ],
)
write_csv(d / "bus_map.csv", ["heat_node", "grid_bus"], [["a", "b4"], ["b", "b5"]])

# -- toy5 ---------------------------------------------------------------

d = ROOT / "toy5"
write_common_series(d / "series", variants=True)
peaks = {"n1": 30, "n2": 20, "n3": 16, "n4": 10, "n5": 6}
for n, p in peaks.items():
    write_series(d / "series" / f"demand_{n}.csv", demand(p))
write_csv(
    d / "nodes.csv",
    ["id", "demand_series", "electric_bus"],
    [[n, f"demand_{n}", bus] for n, bus in
     [("n1", "b9"), ("n2", "b5"), ("n3", "b6"), ("n4", "b10"), ("n5", "b8")]],
)
write_csv(
    d / "assets.csv",
    ASSET_HEADER,
    [
        asset("hp_n1", "n1", "heat_pump", 2039000, 15, potential_capacity=50),
        asset("eb_n1", "n1", "electric_boiler", 305000, 15, efficiency=0.9, potential_capacity=40),
        asset("tes_n1", "n1", "tes_short_term", 250000, 30, potential_capacity=25, h_max=6),
        asset("gb_n2", "n2", "gas_boiler_greengas", 200000, 15, efficiency=0.8, potential_capacity=45),
        asset("chp_n2", "n2", "chp_greengas", 2000000, 15, efficiency_heat=0.45,
              efficiency_elec=0.45, potential_capacity=30),
        # SPF must exceed the COP series everywhere; with the default COP
        # polynomial (positive linear term) COP ~ 19-20 at 76 K lift
        asset("geo_n3", "n3", "geothermal", 2500000, 15, spf=25, potential_capacity=22),
        asset("h2b_n3", "n3", "gas_boiler_hydrogen", 270000, 15, efficiency=0.7, potential_capacity=35),
        asset("st_n4", "n4", "solar_thermal", 435000, 15, potential_capacity=28),
        asset("ates_n4", "n4", "ht_ates", 199550, 30, spf=50, potential_capacity=18, h_max=60),
        asset("hp_n4", "n4", "heat_pump", 2039000, 15, potential_capacity=25),
        asset("rh_n5", "n5", "residual_heat", 1200000, 15, potential_capacity=14,
              availability_series="residual_availability"),
        asset("wte_n5", "n5", "waste_to_energy", 600000, 15, efficiency=0.8, potential_capacity=18),
        asset("pipe_12", "n1", "pipeline", 100, 30, length_m=5000, potential_capacity=120, node_b="n2"),
        asset("pipe_23", "n2", "pipeline", 100, 30, length_m=8000, potential_capacity=120, node_b="n3"),
        asset("pipe_34", "n3", "pipeline", 100, 30, length_m=6000, potential_capacity=120, node_b="n4"),
        asset("pipe_45", "n4", "pipeline", 100, 30, length_m=4000, potential_capacity=120, node_b="n5"),
        asset("pipe_15", "n1", "pipeline", 100, 30, length_m=7000, potential_capacity=120, node_b="n5"),
    ],
)
write_csv(
    d / "bus_map.csv",
    ["heat_node", "grid_bus"],
    [["n1", "b9"], ["n2", "b5"], ["n3", "b6"], ["n4", "b10"], ["n5", "b8"]],
)

# -- grid10 -------------------------------------------------------------

d = ROOT / "grid10"
write_csv(
    d / "buses.csv",
    ["id", "vn_kv", "type"],
    [["b1", 110, "reference"], ["b2", 110, "pq"], ["b3", 110, "pq"]]
    + [[f"b{i}", 20, "pq"] for i in range(4, 11)],
)
write_csv(
    d / "lines.csv",
    ["id", "from_bus", "to_bus", "r_ohm", "x_ohm", "b_us", "rating_mva"],
    [
        ["l12", "b1", "b2", 2.0, 8.0, 10, 60],
        ["l13", "b1", "b3", 2.0, 8.0, 10, 60],
        ["l23", "b2", "b3", 2.5, 10.0, 10, 60],
        ["l45", "b4", "b5", 0.35, 0.7, 0, 16],
        ["l56", "b5", "b6", 0.35, 0.7, 0, 16],
        ["l67", "b6", "b7", 0.35, 0.7, 0, 16],
        ["l78", "b7", "b8", 0.35, 0.7, 0, 16],
        ["l89", "b8", "b9", 0.35, 0.7, 0, 16],
        ["l910", "b9", "b10", 0.35, 0.7, 0, 16],
        ["l104", "b10", "b4", 0.35, 0.7, 0, 16],
    ],
)
write_csv(
    d / "trafos.csv",
    ["id", "hv_bus", "lv_bus", "r_pu", "x_pu", "rating_mva"],
    [["t1", "b2", "b4", 0.01, 0.30, 14], ["t2", "b3", "b7", 0.01, 0.30, 14]],
)

# baseline: modest loads everywhere, strong midday PV feed-in at b8..b10
base_load = {f"b{i}": 1.5 + 0.8 * daily(18, 3.0) for i in range(4, 11)}
pv_gen = {f"b{i}": 24.0 * solar_cf for i in (8, 9, 10)}
for i in range(1, 11):
    bus = f"b{i}"
    load = base_load.get(bus, np.zeros(T))
    gen = pv_gen.get(bus, np.zeros(T))
    path = d / "baseline_profiles" / f"{bus}.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("timestamp,p_load_mw,p_gen_mw\n")
        for t in range(T):
            fh.write(f"{timestamps[t]},{np.atleast_1d(load)[t] if np.ndim(load) else 0:.6f},"
                     f"{np.atleast_1d(gen)[t] if np.ndim(gen) else 0:.6f}\n")

print("fixtures written under", ROOT)
