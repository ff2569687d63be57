"""Scenario orchestrator: staged execution with content-hash caching.

Stage graph: ingest -> least_cost -> {baseline flow, least-cost flow,
spores} -> per-spore flows -> metrics/export. Each stage artifact carries
the hash of everything upstream of it; a stage reruns iff that hash
changed or the artifact is missing.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dhn.result import DesignResult
from .dhn.solve import solve_least_cost
from .heatsys.io import ScenarioConfig
from .heatsys.model import HeatSystem
from .metrics.space import (
    DecisionSpace,
    Predicate,
    assemble_decision_space,
    export_bundle,
    export_csv,
    filter_constraints,
    lower_envelope,
)
from .powerflow.grid import ElectricGrid, load_grid
from .powerflow.timeseries import DEFAULT_POWER_FACTOR, FlowResult, InjectionSet, run_timeseries
from .spores.generate import (
    SporeSet,
    SporesConfig,
    default_runs,
    generate_all,
    load_spore_set,
    parse_runs,
    save_spore_set,
)

MANIFEST_NAME = "manifest.json"


def _hash_paths(paths) -> str:
    h = hashlib.sha256()
    for p in sorted(Path(x) for x in paths):
        if p.is_dir():
            for f in sorted(p.rglob("*")):
                if f.is_file():
                    h.update(str(f.relative_to(p)).encode())
                    h.update(f.read_bytes())
        elif p.is_file():
            h.update(p.read_bytes())
    return h.hexdigest()


def _hash_text(*parts: str) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p.encode())
    return h.hexdigest()


@dataclass
class Manifest:
    path: Path
    stages: dict = field(default_factory=dict)

    @classmethod
    def load(cls, out_dir: Path) -> "Manifest":
        p = out_dir / MANIFEST_NAME
        stages = {}
        if p.exists():
            stages = json.loads(p.read_text())
        return cls(path=p, stages=stages)

    def save(self):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text(json.dumps(self.stages, indent=1, sort_keys=True))

    def is_fresh(self, stage: str, input_hash: str, artifacts: list[Path]) -> bool:
        rec = self.stages.get(stage)
        if not rec or rec.get("input_hash") != input_hash or rec.get("status") != "done":
            return False
        for a in artifacts:
            if not a.exists():
                return False
            if rec.get("artifact_hashes", {}).get(a.name) != _hash_paths([a]):
                return False
        return True

    def record(self, stage: str, input_hash: str, artifacts: list[Path], seconds: float,
               status: str = "done", cached: bool = False):
        self.stages[stage] = {
            "status": status,
            "input_hash": input_hash,
            "artifacts": [str(a) for a in artifacts],
            "artifact_hashes": {a.name: _hash_paths([a]) for a in artifacts if a.exists()},
            "seconds": round(seconds, 3),
            "cached": cached,
        }
        self.save()


class ScenarioRunner:
    def __init__(self, config: ScenarioConfig, *, verbose: bool = True):
        self.config = config
        self.out = Path(config.output)
        self.out.mkdir(parents=True, exist_ok=True)
        self.manifest = Manifest.load(self.out)
        self.verbose = verbose
        self._system: HeatSystem | None = None
        self._grid: ElectricGrid | None = None
        self._scenario_hash = _hash_text(
            _hash_paths([config.system, config.grid]),
            repr(
                (
                    config.slack,
                    config.weather_year,
                    config.demand_scale,
                    config.discount_rate,
                    config.sink_temperature,
                    config.cop_coefficients,
                    config.snapshot_weight,
                    sorted(config.spores.items()),
                    sorted(config.powerflow.items()),
                )
            ),
        )

    def log(self, msg: str):
        if self.verbose:
            print(msg, flush=True)

    # -- inputs ---------------------------------------------------------

    @property
    def system(self) -> HeatSystem:
        if self._system is None:
            self._system = self.config.load_system()
        return self._system

    @property
    def grid(self) -> ElectricGrid:
        if self._grid is None:
            self._grid = load_grid(self.config.grid)
        return self._grid

    def spores_config(self) -> SporesConfig:
        sp = self.config.spores
        batch = int(sp.get("batch_size", 4))
        div_batch = int(sp.get("diversification_batch", batch))
        if "targets" in sp:
            runs = parse_runs(list(sp["targets"]), batch, div_batch)
        else:
            kinds = sorted({a.kind for a in self.system.assets if a.kind != "pipeline"})
            runs = default_runs(kinds, batch, div_batch)
        return SporesConfig(
            slack=self.config.slack,
            runs=runs,
            a=float(sp.get("a", 1.0)),
            b=float(sp.get("b", 10.0)),
        )

    def pf_options(self) -> dict:
        pf = self.config.powerflow
        return {
            "power_factor": float(pf.get("power_factor", DEFAULT_POWER_FACTOR)),
            "loading_limit": float(pf.get("loading_limit", 110.0)),
            "overload_window": int(pf.get("overload_window", 7)),
        }

    # -- stages ---------------------------------------------------------

    def stage_least_cost(self) -> DesignResult:
        artifact = self.out / "least_cost.json"
        key = _hash_text("least_cost", self._scenario_hash)
        if self.manifest.is_fresh("least_cost", key, [artifact]):
            try:
                design = DesignResult.load(artifact)
                self.log("stage least_cost: cached")
                return design
            except Exception:
                pass  # unreadable artifact: fall through and recompute
        t0 = time.time()
        design, _, _ = solve_least_cost(self.system)
        design.save(artifact)
        self.manifest.record("least_cost", key, [artifact], time.time() - t0)
        self.log(f"stage least_cost: C* = {design.objective:.1f} EUR/a")
        return design

    def stage_spores(self) -> SporeSet:
        spore_dir = self.out / "spores"
        index = spore_dir / "index.json"
        key = _hash_text("spores", self._scenario_hash)
        if self.manifest.is_fresh("spores", key, [index]):
            try:
                spore_set = load_spore_set(spore_dir)
                self.log("stage spores: cached")
                return spore_set
            except Exception:
                pass  # missing/unreadable spore artifact: regenerate the stage
        t0 = time.time()
        cfg = self.spores_config()
        jobs = self.config.jobs or 1
        spore_set, _ = generate_all(self.system, cfg, jobs=jobs)
        save_spore_set(spore_set, spore_dir)
        self.manifest.record("spores", key, [index], time.time() - t0)
        self.log(f"stage spores: {len(spore_set.spores)} spores, C* = {spore_set.c_star:.1f}")
        for flag in spore_set.flags:
            self.log(f"  warning: {flag}")
        return spore_set

    def _injections(self, design: DesignResult | None) -> InjectionSet:
        grid = self.grid
        n = len(grid.buses)
        T = len(self.system.snapshots)
        load = np.array(grid.baseline_load) if grid.baseline_load is not None else np.zeros((n, T))
        gen = np.array(grid.baseline_gen) if grid.baseline_gen is not None else np.zeros((n, T))
        if load.shape[1] != T:
            raise ValueError(
                f"baseline profiles length {load.shape[1]} != heat horizon {T}"
            )
        if design is not None:
            for bus, series in design.electric_load.items():
                load[grid.bus_index(bus)] += np.asarray(series)
            for bus, series in design.electric_gen.items():
                gen[grid.bus_index(bus)] += np.asarray(series)
        return InjectionSet(load, gen, self.pf_options()["power_factor"])

    def _flow_for(self, name: str, design: DesignResult | None, design_artifact: Path | None) -> FlowResult:
        flow_dir = self.out / "flows"
        flow_dir.mkdir(exist_ok=True)
        artifact = flow_dir / f"{name}.json"
        parts = ["flow", name, self._scenario_hash]
        if design_artifact is not None:
            parts.append(_hash_paths([design_artifact]))
        key = _hash_text(*parts)
        stage = f"flow:{name}"
        if self.manifest.is_fresh(stage, key, [artifact]):
            try:
                return FlowResult.from_dict(json.loads(artifact.read_text()))
            except Exception:
                pass
        t0 = time.time()
        flow = run_timeseries(self.grid, self._injections(design))
        artifact.write_text(json.dumps(flow.to_dict(), sort_keys=True))
        self.manifest.record(stage, key, [artifact], time.time() - t0)
        if flow.divergence_count:
            self.log(f"  {stage}: {flow.divergence_count} diverged snapshots")
        return flow

    def stage_flows(self) -> dict[str, FlowResult]:
        """Power flows for the no-DHN baseline, the least-cost design, every spore."""
        design = self.stage_least_cost()
        spore_set = self.stage_spores()
        flows: dict[str, FlowResult] = {}
        t0 = time.time()
        flows["baseline"] = self._flow_for("baseline", None, None)
        flows["least_cost"] = self._flow_for("least_cost", design, self.out / "least_cost.json")
        spore_dir = self.out / "spores"
        for s in spore_set.spores:
            fname = s.id.replace(":", "_").replace("#", "_")
            flows[s.id] = self._flow_for(fname, s.design, spore_dir / f"{fname}.json")
        self.log(f"stage flows: {len(flows)} runs in {time.time() - t0:.1f}s")
        return flows

    def stage_metrics(self) -> DecisionSpace:
        design = self.stage_least_cost()
        spore_set = self.stage_spores()
        flows = self.stage_flows()
        pf = self.pf_options()
        t0 = time.time()
        spore_rows = [
            (
                s.id,
                s.design,
                {"run_id": s.run_id, "target": s.target, "direction": s.direction,
                 "iteration": s.iteration},
                flows.get(s.id),
            )
            for s in spore_set.spores
        ]
        benchmarks = [
            ("least_cost", design, flows["least_cost"]),
            ("no_dhn", _zero_design(design), flows["baseline"]),
        ]
        space = assemble_decision_space(
            self.system,
            spore_rows,
            benchmarks,
            limit=pf["loading_limit"],
            window=pf["overload_window"],
        )
        key = _hash_text("metrics", self._scenario_hash)
        artifacts = [self.out / "decision_space.csv", self.out / "decision_space.json"]
        if self.manifest.is_fresh("metrics", key, artifacts):
            self.log(f"stage metrics: cached ({len(space.rows)} rows)")
            return space
        export_csv(space, artifacts[0])
        export_bundle(space, artifacts[1], presets=self.presets())
        self.manifest.record("metrics", key, artifacts, time.time() - t0)
        self.log(f"stage metrics: {len(space.rows)} rows")
        return space

    def presets(self) -> dict[str, list[dict]]:
        """Shipped constraint presets; thresholds resolved against this system."""
        peak = sum(float(np.max(nd.demand)) for nd in self.system.nodes)
        return {
            "no_geothermal": [
                {"field": "capacity_geothermal_mw", "op": "<=", "value": 1e-6}
            ],
            "no_seasonal_storage": [
                {"field": "capacity_ht_ates_mw", "op": "<=", "value": 1e-6}
            ],
            "no_p2h": [{"field": "capacity_p2h_mw", "op": "<=", "value": 1e-6}],
            "gas_at_most_20pct_peak": [
                {"field": "capacity_gas_mw", "op": "<=", "value": 0.2 * peak}
            ],
        }

    def run(self) -> DecisionSpace:
        return self.stage_metrics()


def _zero_design(template: DesignResult) -> DesignResult:
    """No-DHN benchmark row: zero capacities, dispatch, and electric profiles."""
    return DesignResult(
        capacities={k: 0.0 for k in template.capacities},
        dispatch={},
        cost_capex=0.0,
        cost_opex=0.0,
        cost_chp_revenue=0.0,
        objective=0.0,
        metadata=dict(template.metadata),
    )


def apply_preset(bundle_path: Path, preset: str) -> list[str]:
    """Filter the exported bundle by a shipped preset; returns kept spore ids.

    Operates on the exported rows (same data the UI consumes) so CLI and UI
    share semantics.
    """
    doc = json.loads(Path(bundle_path).read_text())
    preds = doc["presets"].get(preset)
    if preds is None:
        raise KeyError(f"unknown preset {preset!r}; have {sorted(doc['presets'])}")
    kept = []
    for row in doc["rows"]:
        if row["kind"] != "spore":
            continue
        ok = True
        for p in preds:
            v = row.get(p["field"])
            if v is None:
                ok = False
                break
            op = p["op"]
            ok = (
                (op == "<=" and v <= p["value"])
                or (op == ">=" and v >= p["value"])
                or (op == "<" and v < p["value"])
                or (op == ">" and v > p["value"])
                or (op == "==" and v == p["value"])
                or (op == "!=" and v != p["value"])
            )
            if not ok:
                break
        if ok:
            kept.append(row["id"])
    return sorted(kept)
