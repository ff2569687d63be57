"""Solved design: capacities, dispatch, cost breakdown, electric interface."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass
class DesignResult:
    capacities: dict[str, float]  # asset id -> MW (MWh-rated stores keep MW discharge power)
    dispatch: dict[str, dict[str, list[float]]]  # asset id -> named series
    cost_capex: float
    cost_opex: float
    cost_chp_revenue: float  # positive number, subtracted from total
    objective: float
    electric_load: dict[str, list[float]] = field(default_factory=dict)  # grid bus -> MW
    electric_gen: dict[str, list[float]] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    @property
    def total_cost(self) -> float:
        return self.cost_capex + self.cost_opex - self.cost_chp_revenue

    def capacity_by_kind(self, kinds_of: dict[str, str]) -> dict[str, float]:
        """Aggregate capacities over asset kinds; kinds_of maps asset id -> kind."""
        out: dict[str, float] = {}
        for aid, cap in self.capacities.items():
            kind = kinds_of[aid]
            out[kind] = out.get(kind, 0.0) + cap
        return out

    def to_dict(self) -> dict:
        return {
            "capacities": self.capacities,
            "dispatch": self.dispatch,
            "cost_breakdown": {
                "capex": self.cost_capex,
                "opex": self.cost_opex,
                "chp_revenue": self.cost_chp_revenue,
                "total": self.total_cost,
            },
            "objective": self.objective,
            "electric_profiles": {"load": self.electric_load, "gen": self.electric_gen},
            "metadata": self.metadata,
        }

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=1, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "DesignResult":
        cb = d["cost_breakdown"]
        return cls(
            capacities=dict(d["capacities"]),
            dispatch={k: dict(v) for k, v in d["dispatch"].items()},
            cost_capex=cb["capex"],
            cost_opex=cb["opex"],
            cost_chp_revenue=cb["chp_revenue"],
            objective=d["objective"],
            electric_load=dict(d["electric_profiles"]["load"]),
            electric_gen=dict(d["electric_profiles"]["gen"]),
            metadata=dict(d.get("metadata", {})),
        )

    @classmethod
    def load(cls, path: str | Path) -> "DesignResult":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def net_electric_profile(self, bus: str) -> np.ndarray:
        """Signed net MW (load positive) on one grid bus, for audits."""
        load = np.array(self.electric_load.get(bus, []), dtype=float)
        gen = np.array(self.electric_gen.get(bus, []), dtype=float)
        if load.size == 0:
            load = np.zeros_like(gen)
        if gen.size == 0:
            gen = np.zeros_like(load)
        return load - gen
