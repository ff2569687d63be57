"""Ingestion, validation, and the closed-form technology relations."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from heatplan.heatsys.io import load_heat_system, load_scenario
from heatplan.heatsys.model import (
    HeatNode,
    SnapshotIndex,
    TechnologyAsset,
    ValidationError,
)
from heatplan.heatsys.physics import annuity_factor, heat_pump_cop

from conftest import FIXTURES, make_system


class TestIngestion:
    def test_toy2_round_trip(self, toy2_system):
        assert len(toy2_system.nodes) == 2
        assert len(toy2_system.assets) == 5
        assert len(toy2_system.snapshots) == 168

    def test_reload_identical(self, toy2_system):
        again = load_heat_system(FIXTURES / "toy2")
        assert [n.id for n in again.nodes] == [n.id for n in toy2_system.nodes]
        for a, b in zip(again.nodes, toy2_system.nodes):
            np.testing.assert_array_equal(a.demand, b.demand)
        assert [a.id for a in again.assets] == [a.id for a in toy2_system.assets]
        np.testing.assert_array_equal(
            again.prices.electricity, toy2_system.prices.electricity
        )
        assert again.bus_map == toy2_system.bus_map

    def test_availability_out_of_range_names_record(self):
        with pytest.raises(ValidationError, match="bad_asset"):
            TechnologyAsset(
                id="bad_asset",
                node="n",
                kind="residual_heat",
                availability=np.array([0.5, 1.2]),
            )

    def test_demand_length_mismatch(self):
        with pytest.raises(ValidationError, match="length"):
            make_system(
                assets=[],
                demand={"n": np.ones(7)},  # against T=6 snapshots
                T=6,
            )

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValidationError, match="fusion"):
            TechnologyAsset(id="x", node="n", kind="fusion")

    def test_asset_node_must_exist(self):
        with pytest.raises(ValidationError, match="ghost"):
            make_system(
                assets=[
                    TechnologyAsset(
                        id="gb", node="ghost", kind="gas_boiler_greengas", efficiency=0.8
                    )
                ]
            )

    def test_chp_efficiency_sum_rejected(self):
        with pytest.raises(ValidationError, match="sum"):
            TechnologyAsset(
                id="chp",
                node="n",
                kind="chp_greengas",
                efficiency_heat=0.6,
                efficiency_elec=0.6,
            )

    def test_pipeline_needs_endpoint(self):
        with pytest.raises(ValidationError, match="node_b"):
            TechnologyAsset(id="p", node="a", kind="pipeline", length=100.0)

    def test_snapshot_weights_positive(self):
        with pytest.raises(ValidationError):
            SnapshotIndex(("a", "b"), np.array([1.0, 0.0]))

    def test_negative_demand_rejected(self):
        with pytest.raises(ValidationError, match="non-negative"):
            HeatNode("n", np.array([1.0, -0.5]))

    def test_weather_year_variant_selected(self):
        default = load_heat_system(FIXTURES / "toy5")
        warm = load_heat_system(FIXTURES / "toy5", weather_year="warm")
        np.testing.assert_allclose(
            warm.weather.ambient_temperature,
            default.weather.ambient_temperature + 8.0,
        )

    def test_demand_scale(self):
        base = load_heat_system(FIXTURES / "toy2")
        scaled = load_heat_system(FIXTURES / "toy2", demand_scale=2.0)
        np.testing.assert_allclose(scaled.nodes[0].demand, 2.0 * base.nodes[0].demand)

    def test_snapshot_weight_applied(self):
        sys_ = load_heat_system(FIXTURES / "toy2", snapshot_weight=52.0)
        assert np.all(sys_.snapshots.weights == 52.0)
        assert sys_.snapshots.horizon_hours == pytest.approx(52.0 * 168)

    def test_scenario_parsing(self):
        cfg = load_scenario(FIXTURES / "scenario_toy5.toml")
        assert cfg.system.name == "toy5"
        assert cfg.slack == 0.15
        assert cfg.spores["batch_size"] == 4
        assert cfg.snapshot_weight == pytest.approx(52.142857)

    def test_scenario_slack_range(self, tmp_path):
        bad = tmp_path / "bad.toml"
        bad.write_text('system = "s"\ngrid = "g"\nslack = 1.5\n')
        with pytest.raises(ValidationError, match="slack"):
            load_scenario(bad)


class TestAnnuity:
    def test_reference_value(self):
        assert annuity_factor(15, 0.07) == pytest.approx(9.10791, abs=1e-5)

    def test_zero_rate_limit(self):
        assert annuity_factor(15, 0.0) == 15.0

    def test_one_year(self):
        assert annuity_factor(1, 0.07) == pytest.approx(1 / 1.07, abs=1e-5)

    def test_continuity_at_zero(self):
        for n in (1, 15, 30):
            assert abs(annuity_factor(n, 1e-9) - n) < 1e-6 * n

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            annuity_factor(0.5, 0.07)
        with pytest.raises(ValueError):
            annuity_factor(15, -0.01)

    @given(
        n=st.floats(min_value=1, max_value=60),
        tau=st.floats(min_value=1e-6, max_value=0.5),
    )
    def test_positive_and_below_lifetime(self, n, tau):
        f = annuity_factor(n, tau)
        assert 0 < f < n


class TestCop:
    def test_constant_term(self):
        assert heat_pump_cop(0.0) == 6.81

    def test_printed_polynomial_at_50(self):
        assert heat_pump_cop(50.0) == pytest.approx(14.435, abs=1e-9)

    def test_override_at_50(self):
        assert heat_pump_cop(50.0, (6.81, -0.121, 0.000630)) == pytest.approx(
            2.335, abs=1e-9
        )

    def test_array_matches_scalar(self):
        dts = np.array([0.0, 25.0, 50.0])
        out = heat_pump_cop(dts)
        assert out.shape == (3,)
        for dt, v in zip(dts, out):
            assert v == heat_pump_cop(float(dt))

    def test_nonphysical_raises(self):
        with pytest.raises(ValueError, match="non-physical"):
            heat_pump_cop(10.0, (0.5, 0.0, 0.0))
        with pytest.raises(ValueError, match="non-physical"):
            heat_pump_cop(np.array([5.0, 30.0]), (2.0, -0.05, 0.0))

    def test_system_cop_series(self, toy5_system):
        cop = toy5_system.cop_series()
        dt = 80.0 - toy5_system.weather.ambient_temperature
        a0, a1, a2 = toy5_system.cop_coefficients
        np.testing.assert_allclose(cop, a0 + a1 * dt + a2 * dt * dt)
