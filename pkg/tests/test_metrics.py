"""Loading statistics, heat/grid metric assembly, filtering, and the envelope."""

import csv
import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from heatplan.dhn.solve import solve_least_cost
from heatplan.heatsys.model import TechnologyAsset
from heatplan.metrics.overload import (
    loading_percentile_summary,
    overloaded_component_share,
    persistent_overload_events,
    total_overload_events,
)
from heatplan.metrics.space import (
    GRID_METRIC_NAMES,
    DecisionSpace,
    GridMetrics,
    HeatMetrics,
    Predicate,
    Row,
    assemble_decision_space,
    export_bundle,
    export_csv,
    filter_constraints,
    grid_metrics,
    heat_metrics,
    lower_envelope,
)
from heatplan.powerflow.grid import Branch, Bus, ElectricGrid
from heatplan.powerflow.timeseries import InjectionSet, run_timeseries

from conftest import make_system


def series(*chunks):
    out = []
    for value, count in chunks:
        out.extend([value] * count)
    return np.array(out, dtype=float)


class TestOverloadEvents:
    def test_single_event(self):
        arr = series((100, 1), (115, 7), (100, 1))
        assert persistent_overload_events(arr, 110, 7) == 1

    def test_run_shorter_than_window(self):
        assert persistent_overload_events(series((115, 6)), 110, 7) == 0

    def test_long_run_counts_once(self):
        assert persistent_overload_events(series((115, 14)), 110, 7) == 1

    def test_two_separated_runs(self):
        arr = series((115, 7), (100, 1), (115, 7))
        assert persistent_overload_events(arr, 110, 7) == 2

    def test_empty(self):
        assert persistent_overload_events(np.array([]), 110, 7) == 0

    def test_nan_breaks_runs(self):
        arr = series((115, 4))
        arr = np.concatenate([arr, [np.nan], series((115, 4))])
        assert persistent_overload_events(arr, 110, 4) == 2
        assert persistent_overload_events(arr, 110, 5) == 0

    def test_at_limit_not_overloaded(self):
        assert persistent_overload_events(series((110, 10)), 110, 7) == 0

    def test_window_domain(self):
        with pytest.raises(ValueError, match="window"):
            persistent_overload_events(np.ones(3), 110, 0)

    @given(
        loading=st.lists(
            st.one_of(st.floats(0, 200), st.just(float("nan"))),
            min_size=0,
            max_size=40,
        )
    )
    def test_monotone_in_limit_and_window(self, loading):
        arr = np.array(loading)
        assert persistent_overload_events(arr, 110, 3) >= persistent_overload_events(
            arr, 120, 3
        )
        assert persistent_overload_events(arr, 110, 3) >= persistent_overload_events(
            arr, 110, 5
        )


class TestPercentileSummary:
    def test_constant(self):
        assert loading_percentile_summary(np.full((10, 3), 80.0)) == 80.0

    def test_hand_computed_time_percentile(self):
        col = np.array([[10.0], [20.0], [30.0], [40.0]])
        # 90th percentile, linear interpolation: 30 + 0.7 * 10
        assert loading_percentile_summary(col) == pytest.approx(37.0)

    def test_hand_computed_component_percentile(self):
        m = np.column_stack([np.full(5, 10.0), np.full(5, 20.0)])
        assert loading_percentile_summary(m) == pytest.approx(17.5)

    def test_time_permutation_invariant(self):
        rng = np.random.default_rng(1)
        m = rng.uniform(0, 150, size=(30, 4))
        shuffled = m[rng.permutation(30)]
        assert loading_percentile_summary(m) == pytest.approx(
            loading_percentile_summary(shuffled)
        )

    def test_bounded_by_extremes(self):
        m = np.random.default_rng(2).uniform(0, 150, size=(20, 5))
        v = loading_percentile_summary(m)
        assert np.nanmin(m) <= v <= np.nanmax(m)

    def test_all_nan_component_excluded(self):
        m = np.column_stack([np.full(5, 50.0), np.full(5, np.nan)])
        assert loading_percentile_summary(m) == 50.0
        with pytest.raises(ValueError, match="converged"):
            loading_percentile_summary(np.full((5, 2), np.nan))

    def test_component_share(self):
        ok = series((100, 10))
        bad = series((115, 10))
        m = np.column_stack([ok, bad])
        assert overloaded_component_share(m, 110, 7) == 50.0
        assert total_overload_events(m, 110, 7) == 1


class TestHeatMetrics:
    def _gas_system(self, extra=()):
        gb = TechnologyAsset(
            id="gb", node="n", kind="gas_boiler_greengas", investment_cost=200000,
            lifetime=15, efficiency=0.8,
        )
        return make_system([gb, *extra], demand=10.0)

    def test_single_gas_boiler_shares(self):
        system = self._gas_system()
        design, _, _ = solve_least_cost(system)
        m = heat_metrics(system, design)
        assert m.gas_share == pytest.approx(100.0)
        assert m.p2h_share == 0.0
        assert m.nondispatchable_share == 0.0
        assert m.lcoh_eur_per_mwh == pytest.approx(design.total_cost / 60.0)

    def test_storage_outside_share_denominator(self):
        tes = TechnologyAsset(
            id="tes", node="n", kind="tes_short_term", investment_cost=1000,
            lifetime=30, h_max=6.0,
        )
        system = self._gas_system(extra=(tes,))
        design, _, _ = solve_least_cost(system)
        design.capacities["tes"] = 4.0  # force a visible storage build
        m = heat_metrics(system, design)
        assert m.gas_share == pytest.approx(100.0)  # denominator excludes storage
        assert m.storage_capacity_mw == pytest.approx(4.0)

    def test_shares_sum_to_at_most_100(self):
        system = self._gas_system()
        design, _, _ = solve_least_cost(system)
        m = heat_metrics(system, design)
        assert m.p2h_share + m.gas_share + m.nondispatchable_share <= 100.0 + 1e-9

    def test_zero_delivered_rejected(self):
        system = self._gas_system()
        zero = make_system([system.assets[0]], demand=0.0)
        design, _, _ = solve_least_cost(zero)
        with pytest.raises(ValueError, match="LCOH"):
            heat_metrics(zero, design)


def _flow(loads):
    grid = ElectricGrid(
        buses=[Bus("b1", 20.0, "reference"), Bus("b2", 20.0, "pq")],
        branches=[
            Branch("l1", "b1", "b2", 0.01, 0.1, 0.0, 16.0, "line"),
            Branch("t1", "b1", "b2", 0.01, 0.3, 0.0, 14.0, "trafo"),
        ],
    )
    p_load = np.vstack([np.zeros_like(loads, dtype=float), np.asarray(loads, float)])
    return run_timeseries(grid, InjectionSet(p_load, np.zeros_like(p_load)))


class TestGridMetrics:
    def test_deterministic(self):
        flow = _flow([5.0, 12.0, 20.0, 20.0])
        assert grid_metrics(flow) == grid_metrics(flow)

    def test_overload_wiring(self):
        # impedance split puts ~3/4 on the line, ~1/4 on the trafo; 70 MW
        # overloads both (line ~52/16 MVA, trafo ~18/14 MVA) for 8 snapshots
        flow = _flow([70.0] * 8)
        m = grid_metrics(flow, limit=110.0, window=7)
        assert m.line_overload_events >= 1
        assert m.transformer_overload_events >= 1
        assert m.overloaded_lines_share == 100.0
        assert m.diverged_snapshots == 0


def _heat(lcoh=40.0):
    return HeatMetrics(10.0, 20.0, 30.0, 5.0, 2.0, lcoh)


def _grid_vals(v):
    return GridMetrics(int(v), float(v), float(v), int(v), float(v), float(v))


def mk_row(rid, kind="spore", cost=1.0, grid=None, caps=None):
    return Row(
        id=rid, kind=kind, cost_eur=cost, heat=_heat(), grid=grid,
        capacities_by_kind=caps or {}, incomplete=grid is None,
    )


def small_space():
    rows = [
        mk_row("least_cost", kind="benchmark", grid=_grid_vals(2)),
        mk_row("a", grid=_grid_vals(1), caps={"heat_pump": 3.0}),
        mk_row("b", grid=_grid_vals(2), caps={"heat_pump": 8.0}),
        mk_row("c", grid=_grid_vals(3), caps={"gas_boiler_greengas": 5.0}),
        mk_row("d", grid=None),
    ]
    return DecisionSpace(rows=rows)


class TestAssemble:
    def test_ordering_and_flags(self):
        system = make_system(
            [
                TechnologyAsset(
                    id="gb", node="n", kind="gas_boiler_greengas",
                    investment_cost=200000, lifetime=15, efficiency=0.8,
                )
            ],
            demand=10.0,
        )
        design, _, _ = solve_least_cost(system)
        flow = _flow([5.0] * 6)
        space = assemble_decision_space(
            system,
            spore_rows=[("z#1", design, {"run": "z"}, flow), ("a#0", design, {}, None)],
            benchmark_rows=[("least_cost", design, flow)],
        )
        assert [r.id for r in space.rows] == ["least_cost", "a#0", "z#1"]
        assert space.rows[0].kind == "benchmark"
        assert space.row("a#0").incomplete and space.row("a#0").grid is None
        assert not space.row("z#1").incomplete
        flat = space.row("a#0").flat()
        assert flat["line_loading_p"] is None

    def test_flat_aggregates(self):
        row = mk_row(
            "x",
            grid=_grid_vals(0),
            caps={"heat_pump": 3.0, "electric_boiler": 2.0, "gas_boiler_hydrogen": 4.0},
        )
        flat = row.flat()
        assert flat["capacity_p2h_mw"] == pytest.approx(5.0)
        assert flat["capacity_gas_mw"] == pytest.approx(4.0)


class TestFiltering:
    def test_unknown_field(self):
        with pytest.raises(KeyError, match="warp"):
            filter_constraints(small_space(), [Predicate("warp", "<=", 1.0)])

    def test_conjunction(self):
        space = small_space()
        out = filter_constraints(
            space,
            [
                Predicate("capacity_p2h_mw", ">", 0.0),
                Predicate("capacity_p2h_mw", "<=", 5.0),
            ],
        )
        assert [r.id for r in out.rows if r.kind == "spore"] == ["a"]
        assert any("capacity_p2h_mw" in entry for entry in out.filter_log)

    def test_benchmarks_always_retained(self):
        out = filter_constraints(small_space(), [Predicate("cost_eur", "<", -1.0)])
        assert [r.id for r in out.rows] == ["least_cost"]

    def test_vacuous_keeps_everything(self):
        space = small_space()
        out = filter_constraints(space, [])
        assert [r.id for r in out.rows] == [r.id for r in space.rows]

    def test_none_metric_never_matches(self):
        out = filter_constraints(
            small_space(), [Predicate("line_loading_p", "<=", 1e9)]
        )
        assert "d" not in {r.id for r in out.rows}


class TestEnvelope:
    def test_reflexive_and_nonstrict(self):
        env = lower_envelope(small_space())
        assert "least_cost" in env  # equal on every metric counts
        assert env == {"least_cost", "a", "b"}

    def test_worse_on_one_metric_excluded(self):
        assert "c" not in lower_envelope(small_space())

    def test_missing_grid_reference(self):
        space = DecisionSpace(rows=[mk_row("least_cost", kind="benchmark", grid=None)])
        with pytest.raises(ValueError, match="grid"):
            lower_envelope(space)


class TestExport:
    def test_csv_layout(self, tmp_path):
        path = tmp_path / "space.csv"
        export_csv(small_space(), path)
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert [r["id"] for r in rows] == ["least_cost", "a", "b", "c", "d"]
        assert rows[1]["capacity_p2h_mw"] == "3"
        assert rows[4]["line_loading_p"] == ""  # incomplete rows stay blank

    def test_float_formatting(self, tmp_path):
        space = DecisionSpace(rows=[mk_row("x", cost=1234567.89012345, grid=_grid_vals(0))])
        export_csv(space, tmp_path / "x.csv")
        text = (tmp_path / "x.csv").read_text()
        assert "1234567.89" in text  # ten significant digits

    def test_bundle_schema(self, tmp_path):
        path = tmp_path / "decision_space.json"
        export_bundle(small_space(), path, presets={"no_p2h": [
            {"field": "capacity_p2h_mw", "op": "<=", "value": 1e-6}
        ]})
        doc = json.loads(path.read_text())
        assert doc["schema_version"] == 1
        assert len(doc["rows"]) == 5
        assert doc["benchmarks"] == ["least_cost"]
        assert set(doc["grid_metric_names"]) == set(GRID_METRIC_NAMES)
        assert doc["presets"]["no_p2h"][0]["op"] == "<="
        for name in GRID_METRIC_NAMES:
            assert doc["metrics"][name]["good"] == "lower"
