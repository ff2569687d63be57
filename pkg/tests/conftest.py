"""Shared fixtures: fixture paths, synthetic system builder, one full campaign."""

from __future__ import annotations

import time
from pathlib import Path

import numpy as np
import pytest

from heatplan.heatsys.io import load_heat_system, load_scenario
from heatplan.heatsys.model import (
    CarrierPrices,
    HeatNode,
    HeatSystem,
    SnapshotIndex,
    TechnologyAsset,
    WeatherInputs,
)
from heatplan.pipeline import ScenarioRunner
from heatplan.powerflow.grid import load_grid

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# scenario knobs mirrored from fixtures/scenario_toy5.toml
TOY5_COP = (5.2, -0.04, 0.0002)
TOY5_WEIGHT = 52.142857


def make_system(
    assets,
    demand=10.0,
    T=6,
    elec_price=50.0,
    h2_price=95.0,
    gg_price=52.0,
    waste_price=6.0,
    rh_price=12.0,
    nodes=("n",),
    cop_coefficients=(6.81, 0.121, 0.000630),
    ambient=20.0,
    sink=80.0,
    bus_map=None,
    discount_rate=0.07,
    weights=1.0,
    availability=None,
):
    """Small synthetic HeatSystem for unit tests.

    `demand` may be a scalar (first node only), an array, or a dict node->series.
    """
    ts = tuple(f"2050-01-01T{t:02d}:00:00" for t in range(T))
    snapshots = SnapshotIndex(ts, np.full(T, float(weights)))

    def series(v):
        arr = np.asarray(v, dtype=float)
        return np.full(T, float(v)) if arr.ndim == 0 else arr

    if not isinstance(demand, dict):
        demand = {nodes[0]: demand, **{n: 0.0 for n in nodes[1:]}}
    heat_nodes = tuple(
        HeatNode(n, series(demand.get(n, 0.0)), (bus_map or {}).get(n)) for n in nodes
    )
    prices = CarrierPrices(
        electricity=series(elec_price),
        hydrogen=series(h2_price),
        green_gas=series(gg_price),
        waste=series(waste_price),
        residual_heat=series(rh_price),
    )
    weather = WeatherInputs(
        ambient_temperature=series(ambient),
        solar_thermal_cf=series(availability if availability is not None else 1.0),
        sink_temperature=sink,
    )
    return HeatSystem(
        snapshots=snapshots,
        nodes=heat_nodes,
        assets=tuple(assets),
        prices=prices,
        weather=weather,
        bus_map=bus_map or {},
        discount_rate=discount_rate,
        cop_coefficients=cop_coefficients,
    )


def truncate_system(system: HeatSystem, T: int) -> HeatSystem:
    """First T snapshots of a loaded system (keeps everything else)."""
    sl = slice(0, T)
    snapshots = SnapshotIndex(system.snapshots.timestamps[:T], system.snapshots.weights[sl])
    nodes = tuple(
        HeatNode(n.id, n.demand[sl], n.electric_bus_ref) for n in system.nodes
    )
    assets = tuple(
        TechnologyAsset(
            id=a.id,
            node=a.node,
            kind=a.kind,
            investment_cost=a.investment_cost,
            lifetime=a.lifetime,
            variable_cost=a.variable_cost[sl]
            if isinstance(a.variable_cost, np.ndarray)
            else a.variable_cost,
            efficiency=a.efficiency,
            efficiency_elec=a.efficiency_elec,
            efficiency_heat=a.efficiency_heat,
            spf=a.spf,
            potential_capacity=a.potential_capacity,
            availability=a.availability[sl] if a.availability is not None else None,
            length=a.length,
            h_max=a.h_max,
            node_b=a.node_b,
        )
        for a in system.assets
    )
    prices = CarrierPrices(
        electricity=system.prices.electricity[sl],
        hydrogen=system.prices.hydrogen[sl],
        green_gas=system.prices.green_gas[sl],
        waste=system.prices.waste[sl],
        residual_heat=system.prices.residual_heat[sl],
    )
    weather = WeatherInputs(
        ambient_temperature=system.weather.ambient_temperature[sl],
        solar_thermal_cf=system.weather.solar_thermal_cf[sl],
        sink_temperature=system.weather.sink_temperature,
    )
    return HeatSystem(
        snapshots=snapshots,
        nodes=nodes,
        assets=assets,
        prices=prices,
        weather=weather,
        bus_map=dict(system.bus_map),
        discount_rate=system.discount_rate,
        cop_coefficients=system.cop_coefficients,
        metadata=dict(system.metadata),
    )


@pytest.fixture(scope="session")
def toy2_system():
    return load_heat_system(FIXTURES / "toy2")


@pytest.fixture(scope="session")
def toy5_system():
    return load_heat_system(
        FIXTURES / "toy5",
        cop_coefficients=TOY5_COP,
        snapshot_weight=TOY5_WEIGHT,
    )


@pytest.fixture(scope="session")
def grid10():
    return load_grid(FIXTURES / "grid10")


def _write_scenario(path: Path, out_dir: str, slack: float = 0.15) -> Path:
    scenario = path / "scenario.toml"
    scenario.write_text(
        f'system = "{FIXTURES / "toy5"}"\n'
        f'grid = "{FIXTURES / "grid10"}"\n'
        f'output = "{out_dir}"\n'
        f"slack = {slack}\n"
        f"snapshot_weight = {TOY5_WEIGHT}\n"
        f"cop_coefficients = [{', '.join(str(c) for c in TOY5_COP)}]\n"
        "[spores]\n"
        'targets = ["p2h:min", "p2h:max", "molecule:min", "molecule:max", "diversify"]\n'
        "batch_size = 4\n"
        "diversification_batch = 4\n"
        "[powerflow]\n"
        "power_factor = 0.95\n"
        "loading_limit = 110.0\n"
        "overload_window = 7\n"
    )
    return scenario


@pytest.fixture(scope="session")
def campaign(tmp_path_factory):
    """One full end-to-end run of the toy scenario (cached for the session)."""
    root = tmp_path_factory.mktemp("campaign_a")
    scenario = _write_scenario(root, "out")
    runner = ScenarioRunner(load_scenario(scenario), verbose=False)
    t0 = time.time()
    space = runner.run()
    return {
        "runner": runner,
        "scenario": scenario,
        "out": runner.out,
        "space": space,
        "seconds": time.time() - t0,
    }


@pytest.fixture(scope="session")
def campaign_repeat(tmp_path_factory):
    """Second run of the identical scenario in a fresh directory."""
    root = tmp_path_factory.mktemp("campaign_b")
    scenario = _write_scenario(root, "out")
    runner = ScenarioRunner(load_scenario(scenario), verbose=False)
    space = runner.run()
    return {"runner": runner, "scenario": scenario, "out": runner.out, "space": space}
