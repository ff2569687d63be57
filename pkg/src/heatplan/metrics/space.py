"""Heat- and grid-side metrics per design, and the joined decision space."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from ..dhn.result import DesignResult
from ..heatsys.model import (
    GAS_KINDS,
    HeatSystem,
    NON_DISPATCHABLE_KINDS,
    P2H_KINDS,
    STORAGE_KINDS,
)
from ..powerflow.timeseries import FlowResult
from .overload import (
    DEFAULT_LIMIT_PERCENT,
    DEFAULT_WINDOW,
    loading_percentile_summary,
    overloaded_component_share,
    total_overload_events,
)

# primary heat supply excludes storage and pipelines
NON_PRIMARY_KINDS = STORAGE_KINDS | {"pipeline"}

GRID_METRIC_NAMES = (
    "line_overload_events",
    "overloaded_lines_share",
    "line_loading_p",
    "transformer_overload_events",
    "overloaded_transformers_share",
    "transformer_loading_p",
)

HEAT_METRIC_NAMES = (
    "p2h_share",
    "gas_share",
    "nondispatchable_share",
    "storage_capacity_mw",
    "pipeline_capacity_mw",
    "lcoh_eur_per_mwh",
)

METRIC_METADATA = {
    "cost_eur": {"unit": "EUR/a", "good": "lower", "side": "cost"},
    "p2h_share": {"unit": "%", "good": None, "side": "heat"},
    "gas_share": {"unit": "%", "good": None, "side": "heat"},
    "nondispatchable_share": {"unit": "%", "good": None, "side": "heat"},
    "storage_capacity_mw": {"unit": "MW", "good": None, "side": "heat"},
    "pipeline_capacity_mw": {"unit": "MW", "good": None, "side": "heat"},
    "lcoh_eur_per_mwh": {"unit": "EUR/MWh", "good": "lower", "side": "heat"},
    "line_overload_events": {"unit": "count", "good": "lower", "side": "grid"},
    "overloaded_lines_share": {"unit": "%", "good": "lower", "side": "grid"},
    "line_loading_p": {"unit": "%", "good": "lower", "side": "grid"},
    "transformer_overload_events": {"unit": "count", "good": "lower", "side": "grid"},
    "overloaded_transformers_share": {"unit": "%", "good": "lower", "side": "grid"},
    "transformer_loading_p": {"unit": "%", "good": "lower", "side": "grid"},
}


@dataclass
class HeatMetrics:
    p2h_share: float
    gas_share: float
    nondispatchable_share: float
    storage_capacity_mw: float
    pipeline_capacity_mw: float
    lcoh_eur_per_mwh: float


@dataclass
class GridMetrics:
    line_overload_events: int
    overloaded_lines_share: float
    line_loading_p: float
    transformer_overload_events: int
    overloaded_transformers_share: float
    transformer_loading_p: float
    diverged_snapshots: int = 0


@dataclass
class Row:
    id: str
    kind: str  # "spore" | "benchmark"
    cost_eur: float
    heat: HeatMetrics
    grid: GridMetrics | None
    capacities_by_kind: dict[str, float]
    provenance: dict = field(default_factory=dict)
    incomplete: bool = False

    def flat(self) -> dict:
        d: dict = {"id": self.id, "kind": self.kind, "cost_eur": self.cost_eur}
        d.update(asdict(self.heat))
        if self.grid is not None:
            d.update(asdict(self.grid))
        else:
            d.update({k: None for k in GRID_METRIC_NAMES})
            d["diverged_snapshots"] = None
        for k, v in sorted(self.capacities_by_kind.items()):
            d[f"capacity_{k}_mw"] = v
        caps = self.capacities_by_kind
        d["capacity_p2h_mw"] = sum(caps.get(k, 0.0) for k in P2H_KINDS)
        d["capacity_gas_mw"] = sum(caps.get(k, 0.0) for k in GAS_KINDS)
        d["capacity_nondispatchable_mw"] = sum(caps.get(k, 0.0) for k in NON_DISPATCHABLE_KINDS)
        d["incomplete"] = self.incomplete
        return d


@dataclass
class DecisionSpace:
    rows: list[Row]
    limit_percent: float = DEFAULT_LIMIT_PERCENT
    window: int = DEFAULT_WINDOW
    filter_log: list[str] = field(default_factory=list)

    def row(self, row_id: str) -> Row:
        for r in self.rows:
            if r.id == row_id:
                return r
        raise KeyError(row_id)

    @property
    def benchmarks(self) -> list[Row]:
        return [r for r in self.rows if r.kind == "benchmark"]


def heat_metrics(system: HeatSystem, design: DesignResult) -> HeatMetrics:
    kinds = {a.id: a.kind for a in system.assets}
    primary = {
        aid: cap for aid, cap in design.capacities.items() if kinds[aid] not in NON_PRIMARY_KINDS
    }
    total_primary = sum(primary.values())

    def share(kind_set) -> float:
        if total_primary <= 0:
            return 0.0
        return 100.0 * sum(c for a, c in primary.items() if kinds[a] in kind_set) / total_primary

    storage = sum(c for a, c in design.capacities.items() if kinds[a] in STORAGE_KINDS)
    pipeline = sum(c for a, c in design.capacities.items() if kinds[a] == "pipeline")

    delivered = float(
        sum(np.dot(system.snapshots.weights, nd.demand) for nd in system.nodes)
    )
    if delivered <= 0:
        raise ValueError("zero delivered heat: LCOH undefined")
    return HeatMetrics(
        p2h_share=share(P2H_KINDS),
        gas_share=share(GAS_KINDS),
        nondispatchable_share=share(NON_DISPATCHABLE_KINDS),
        storage_capacity_mw=storage,
        pipeline_capacity_mw=pipeline,
        lcoh_eur_per_mwh=design.total_cost / delivered,
    )


def grid_metrics(
    flow: FlowResult, limit: float = DEFAULT_LIMIT_PERCENT, window: int = DEFAULT_WINDOW
) -> GridMetrics:
    _, line_loading = flow.loading_of("line")
    _, trafo_loading = flow.loading_of("trafo")
    return GridMetrics(
        line_overload_events=total_overload_events(line_loading, limit, window),
        overloaded_lines_share=overloaded_component_share(line_loading, limit, window),
        line_loading_p=loading_percentile_summary(line_loading),
        transformer_overload_events=total_overload_events(trafo_loading, limit, window),
        overloaded_transformers_share=overloaded_component_share(trafo_loading, limit, window),
        transformer_loading_p=loading_percentile_summary(trafo_loading),
        diverged_snapshots=flow.divergence_count,
    )


def assemble_decision_space(
    system: HeatSystem,
    spore_rows: list[tuple[str, DesignResult, dict, FlowResult | None]],
    benchmark_rows: list[tuple[str, DesignResult, FlowResult | None]],
    *,
    limit: float = DEFAULT_LIMIT_PERCENT,
    window: int = DEFAULT_WINDOW,
) -> DecisionSpace:
    """Join heat metrics with grid metrics; rows with a missing FlowResult are
    kept but flagged incomplete. Deterministic ordering: benchmarks first,
    then spores by id."""
    kinds = {a.id: a.kind for a in system.assets}
    rows: list[Row] = []

    def make_row(row_id, kind, design, flow, provenance):
        return Row(
            id=row_id,
            kind=kind,
            cost_eur=design.total_cost,
            heat=heat_metrics(system, design),
            grid=grid_metrics(flow, limit, window) if flow is not None else None,
            capacities_by_kind=design.capacity_by_kind(kinds),
            provenance=provenance,
            incomplete=flow is None,
        )

    for row_id, design, flow in benchmark_rows:
        rows.append(make_row(row_id, "benchmark", design, flow, {}))
    for row_id, design, provenance, flow in sorted(spore_rows, key=lambda r: r[0]):
        rows.append(make_row(row_id, "spore", design, flow, provenance))
    return DecisionSpace(rows=rows, limit_percent=limit, window=window)


# -- filtering and the lower grid-loading envelope ----------------------

OPS = {
    "<=": lambda a, b: a <= b,
    ">=": lambda a, b: a >= b,
    "<": lambda a, b: a < b,
    ">": lambda a, b: a > b,
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
}


@dataclass(frozen=True)
class Predicate:
    """Comparison on a flat-row field (metric or capacity_<kind>_mw)."""


    field: str
    op: str
    value: float

    def matches(self, row: Row) -> bool:
        flat = row.flat()
        if self.field not in flat:
            raise KeyError(f"predicate references unknown field {self.field!r}")
        v = flat[self.field]
        if v is None:
            return False
        return OPS[self.op](v, self.value)


def filter_constraints(space: DecisionSpace, predicates: list[Predicate]) -> DecisionSpace:
    """Subset of spore rows satisfying every predicate; benchmarks retained."""
    kept = [
        r
        for r in space.rows
        if r.kind == "benchmark" or all(p.matches(r) for p in predicates)
    ]
    log = space.filter_log + [f"{p.field} {p.op} {p.value}" for p in predicates]
    return DecisionSpace(
        rows=kept, limit_percent=space.limit_percent, window=space.window, filter_log=log
    )


def lower_envelope(space: DecisionSpace, reference_id: str = "least_cost") -> set[str]:
    """Spore ids no worse than the reference on every grid metric (non-strict)."""
    ref = space.row(reference_id)
    if ref.grid is None:
        raise ValueError(f"reference row {reference_id!r} has no grid metrics")
    ref_flat = ref.flat()
    out = set()
    for r in space.rows:
        if r.grid is None:
            continue
        flat = r.flat()
        if all(flat[m] <= ref_flat[m] for m in GRID_METRIC_NAMES):
            out.add(r.id)
    return out


# -- export -------------------------------------------------------------

SCHEMA_VERSION = 1


def export_csv(space: DecisionSpace, path: str | Path) -> None:
    flats = [r.flat() for r in space.rows]
    cols: list[str] = []
    for f in flats:
        for k in f:
            if k not in cols:
                cols.append(k)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=cols)
        writer.writeheader()
        for f in flats:
            writer.writerow({k: _fmt(f.get(k)) for k in cols})


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.10g}"
    return v


def export_bundle(
    space: DecisionSpace, path: str | Path, presets: dict[str, list[dict]] | None = None
) -> None:
    """decision_space.json consumed by the explorer UI."""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "metrics": METRIC_METADATA,
        "grid_metric_names": list(GRID_METRIC_NAMES),
        "limit_percent": space.limit_percent,
        "window": space.window,
        "rows": [r.flat() for r in space.rows],
        "benchmarks": [r.id for r in space.benchmarks],
        "presets": presets or {},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
