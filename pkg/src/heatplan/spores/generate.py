"""Near-optimal design generation: budget cut, multi-objective runs, batches."""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..dhn.compile import CompileOptions, VariableLayout
from ..dhn.result import DesignResult
from ..dhn.solve import extract_design, solve_least_cost
from ..heatsys.model import HeatSystem
from ..lp.problem import LinearProgram, add_budget_constraint, replace_objective
from ..lp.solve import solve
from .weights import WeightState, update_weights_evolving_average

BUDGET_REL_TOL = 1e-6

# named technology groups usable as intensification targets
TARGET_GROUPS = {
    "p2h": ("heat_pump", "electric_boiler"),
    "molecule": ("gas_boiler_greengas", "gas_boiler_hydrogen", "chp_greengas", "chp_hydrogen"),
    "dispatchable": (
        "heat_pump",
        "electric_boiler",
        "gas_boiler_greengas",
        "gas_boiler_hydrogen",
        "chp_greengas",
        "chp_hydrogen",
        "waste_to_energy",
    ),
    "non_dispatchable": ("geothermal", "solar_thermal", "residual_heat"),
}


@dataclass(frozen=True)
class RunSpec:
    run_id: str
    target: str | None  # technology kind or named group; None = pure diversification
    direction: str  # "min" | "max" (ignored for pure diversification)
    batch_size: int


@dataclass
class SporesConfig:
    slack: float = 0.10
    runs: list[RunSpec] = field(default_factory=list)
    a: float = 1.0
    b: float = 10.0
    weight_strategy: str = "evolving_average"
    normalization: str = "potential"

    def __post_init__(self):
        if self.slack < 0:
            raise ValueError("slack must be >= 0")
        if any(r.batch_size < 1 for r in self.runs):
            raise ValueError("batch sizes must be >= 1")
        pure = [r for r in self.runs if r.target is None]
        if len(pure) != 1:
            raise ValueError(f"exactly one pure-diversification run required, found {len(pure)}")

    @property
    def total_spores(self) -> int:
        return sum(r.batch_size for r in self.runs)


def default_runs(kinds_present: list[str], batch_size: int, diversification_batch: int) -> list[RunSpec]:
    """Min/max intensification per kind and named group, plus one diversification run."""
    targets = list(dict.fromkeys(kinds_present))
    targets += [g for g, members in TARGET_GROUPS.items() if any(k in kinds_present for k in members)]
    runs = []
    for tgt in targets:
        for direction in ("min", "max"):
            runs.append(RunSpec(f"{tgt}:{direction}", tgt, direction, batch_size))
    runs.append(RunSpec("diversify", None, "min", diversification_batch))
    return runs


def parse_runs(specs: list[str], batch_size: int, diversification_batch: int) -> list[RunSpec]:
    """Parse "target:direction" strings; a bare "diversify" is the pure run."""
    runs = []
    for s in specs:
        if s == "diversify":
            runs.append(RunSpec("diversify", None, "min", diversification_batch))
            continue
        tgt, _, direction = s.partition(":")
        if direction not in ("min", "max"):
            raise ValueError(f"run spec {s!r}: direction must be min or max")
        runs.append(RunSpec(s, tgt, direction, batch_size))
    if not any(r.target is None for r in runs):
        runs.append(RunSpec("diversify", None, "min", diversification_batch))
    return runs


@dataclass
class Spore:
    id: str
    design: DesignResult
    cost: float
    run_id: str
    target: str | None
    direction: str
    iteration: int
    a: float
    b: float
    weight_hash: str

    def to_dict(self) -> dict:
        d = self.design.to_dict()
        d["provenance"] = {
            "id": self.id,
            "cost": self.cost,
            "run_id": self.run_id,
            "target": self.target,
            "direction": self.direction,
            "iteration": self.iteration,
            "a": self.a,
            "b": self.b,
            "weight_hash": self.weight_hash,
        }
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Spore":
        p = d["provenance"]
        return cls(
            id=p["id"],
            design=DesignResult.from_dict(d),
            cost=p["cost"],
            run_id=p["run_id"],
            target=p["target"],
            direction=p["direction"],
            iteration=p["iteration"],
            a=p["a"],
            b=p["b"],
            weight_hash=p["weight_hash"],
        )


@dataclass
class SporeSet:
    spores: list[Spore]
    c_star: float
    slack: float
    flags: list[str] = field(default_factory=list)

    def index(self) -> dict:
        return {
            "c_star": self.c_star,
            "slack": self.slack,
            "flags": self.flags,
            "spores": [
                {
                    "id": s.id,
                    "cost": s.cost,
                    "run_id": s.run_id,
                    "target": s.target,
                    "direction": s.direction,
                    "iteration": s.iteration,
                }
                for s in self.spores
            ],
        }


def _target_vars(layout: VariableLayout, target: str) -> list[int]:
    kinds = TARGET_GROUPS.get(target, (target,))
    vars_ = [e.var for e in layout.capacity_entries if e.kind in kinds]
    if not vars_:
        raise ValueError(f"intensification target {target!r} matches no capacity variables")
    return vars_


def build_spores_objective(
    layout: VariableLayout,
    weights: WeightState | None,
    target_vars: list[int] | None,
    a: float,
    b: float,
    direction: str,
) -> dict[int, float]:
    """Weighted diversification plus signed intensification, capacity-normalized."""
    if target_vars is None:
        b = 0.0
    obj: dict[int, float] = {}
    if a != 0.0:
        if weights is None:
            raise ValueError("diversification term requires a weight state")
        for j, e in enumerate(layout.capacity_entries):
            obj[e.var] = obj.get(e.var, 0.0) + a * weights.omega[j] / e.norm_scale
    if b != 0.0:
        sign = 1.0 if direction == "min" else -1.0
        norm = {e.var: e.norm_scale for e in layout.capacity_entries}
        for v in target_vars:
            obj[v] = obj.get(v, 0.0) + sign * b / norm[v]
    if not obj:
        raise ValueError("SPORES objective is empty (a = b = 0)")
    return obj


def _weight_hash(weights: WeightState) -> str:
    return hashlib.sha256(weights.omega.tobytes()).hexdigest()[:16]


def _capacity_vector(layout: VariableLayout, x: np.ndarray) -> np.ndarray:
    return np.array([x[e.var] for e in layout.capacity_entries])


def generate_batch(
    system: HeatSystem,
    budget_lp: LinearProgram,
    layout: VariableLayout,
    c_star: float,
    config: SporesConfig,
    run: RunSpec,
    reference_capacities: np.ndarray,
) -> list[Spore]:
    """One run: first solve intensifies (or seeds from the cost optimum for the
    pure-diversification run), later solves add the weighted diversification term."""
    n = len(layout.capacity_entries)
    state = WeightState(num_entries=n)
    cost_coeffs = budget_lp.metadata["cost_coefficients"]
    budget = (1 + config.slack) * c_star
    spores: list[Spore] = []

    target_vars = _target_vars(layout, run.target) if run.target is not None else None
    if target_vars is None:
        # diversify away from the least-cost design
        state = update_weights_evolving_average(state, reference_capacities)

    for it in range(run.batch_size):
        if target_vars is not None and it == 0:
            a_eff, b_eff = 0.0, 1.0
        elif target_vars is None:
            a_eff, b_eff = 1.0, 0.0
        else:
            a_eff, b_eff = config.a, config.b
        objective = build_spores_objective(layout, state, target_vars, a_eff, b_eff, run.direction)
        lp = replace_objective(budget_lp, objective)
        sol = solve(lp)
        if sol.status != "optimal":
            raise RuntimeError(
                f"run {run.run_id} iteration {it}: status {sol.status} under cost budget"
            )
        cost = float(sum(c * sol.x[i] for i, c in cost_coeffs.items()))
        if cost > budget * (1 + BUDGET_REL_TOL) + 1e-9:
            raise RuntimeError(
                f"run {run.run_id} iteration {it}: cost {cost} exceeds budget {budget}"
            )
        design = extract_design(system, layout, sol.x, cost)
        design.metadata["objective_value"] = sol.objective
        caps = _capacity_vector(layout, sol.x)
        state = update_weights_evolving_average(state, caps)
        spores.append(
            Spore(
                id=f"{run.run_id}#{it}",
                design=design,
                cost=cost,
                run_id=run.run_id,
                target=run.target,
                direction=run.direction,
                iteration=it,
                a=a_eff,
                b=b_eff,
                weight_hash=_weight_hash(state),
            )
        )
    return spores


def generate_all(
    system: HeatSystem,
    config: SporesConfig,
    *,
    compile_options: CompileOptions | None = None,
    jobs: int = 1,
) -> tuple[SporeSet, DesignResult]:
    """Full campaign: least-cost solve, budget cut, all runs. Deterministic for
    fixed inputs; runs execute concurrently, iterations within a run sequentially."""
    least_cost, lp, layout = solve_least_cost(system, compile_options)
    c_star = least_cost.objective
    budget_lp = add_budget_constraint(lp, lp.objective, (1 + config.slack) * c_star)
    budget_lp.metadata["cost_coefficients"] = dict(lp.objective)
    ref_caps = np.array([least_cost.capacities[e.asset_id] for e in layout.capacity_entries])

    def run_one(run: RunSpec) -> list[Spore]:
        return generate_batch(system, budget_lp, layout, c_star, config, run, ref_caps)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            batches = list(pool.map(run_one, config.runs))
    else:
        batches = [run_one(r) for r in config.runs]

    flags = []
    for run, batch in zip(config.runs, batches):
        if len(batch) >= 3 and not _batch_is_diverse(layout, batch):
            flags.append(f"run {run.run_id}: degenerate batch (no capacity differs by > 1%)")

    spores = [s for batch in batches for s in batch]
    return SporeSet(spores=spores, c_star=c_star, slack=config.slack, flags=flags), least_cost


def _batch_is_diverse(layout: VariableLayout, batch: list[Spore]) -> bool:
    """At least two designs differ in some capacity by > 1% of its normalization."""
    caps = np.array(
        [[s.design.capacities[e.asset_id] for e in layout.capacity_entries] for s in batch]
    )
    norm = np.array([e.norm_scale for e in layout.capacity_entries])
    for i in range(len(batch)):
        for j in range(i + 1, len(batch)):
            if np.any(np.abs(caps[i] - caps[j]) > 0.01 * norm):
                return True
    return False


def save_spore_set(spore_set: SporeSet, out_dir) -> None:
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for s in spore_set.spores:
        fname = s.id.replace(":", "_").replace("#", "_") + ".json"
        with open(out / fname, "w", encoding="utf-8") as fh:
            json.dump(s.to_dict(), fh, indent=1, sort_keys=True)
    with open(out / "index.json", "w", encoding="utf-8") as fh:
        json.dump(spore_set.index(), fh, indent=1, sort_keys=True)


def load_spore_set(out_dir) -> SporeSet:
    from pathlib import Path

    out = Path(out_dir)
    with open(out / "index.json", encoding="utf-8") as fh:
        index = json.load(fh)
    spores = []
    for entry in index["spores"]:
        fname = entry["id"].replace(":", "_").replace("#", "_") + ".json"
        with open(out / fname, encoding="utf-8") as fh:
            spores.append(Spore.from_dict(json.load(fh)))
    return SporeSet(
        spores=spores, c_star=index["c_star"], slack=index["slack"], flags=index.get("flags", [])
    )
