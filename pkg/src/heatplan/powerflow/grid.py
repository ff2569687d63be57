"""Electric grid model: buses, lines, transformers, and nodal admittance.

Grid definition directory (comma-separated UTF-8 with header rows):

    buses.csv                  id, vn_kv, type (reference | pq)
    lines.csv                  id, from_bus, to_bus, r_ohm, x_ohm, b_us, rating_mva
    trafos.csv                 id, hv_bus, lv_bus, r_pu, x_pu, rating_mva
    baseline_profiles/<bus>.csv   timestamp, p_load_mw, p_gen_mw

Line impedances are in ohms at the from-bus voltage level; transformer
impedances are already per-unit on the system base. Shunt susceptance b_us
is the line's total charging susceptance in microsiemens.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

DEFAULT_S_BASE_MVA = 100.0


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class Bus:
    id: str
    vn_kv: float
    type: str  # "reference" | "pq"


@dataclass(frozen=True)
class Branch:
    """Line or transformer reduced to a series impedance plus optional shunt."""

    id: str
    from_bus: str
    to_bus: str
    r_pu: float
    x_pu: float
    b_shunt_pu: float  # total charging susceptance, split half per end
    rating_mva: float
    kind: str  # "line" | "trafo"


@dataclass
class ElectricGrid:
    buses: list[Bus]
    branches: list[Branch]
    s_base_mva: float = DEFAULT_S_BASE_MVA
    baseline_load: np.ndarray | None = None  # (n_bus, T) MW
    baseline_gen: np.ndarray | None = None
    _bus_index: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        self._bus_index = {b.id: i for i, b in enumerate(self.buses)}
        if len(self._bus_index) != len(self.buses):
            raise GridError("duplicate bus ids")
        refs = [b for b in self.buses if b.type == "reference"]
        if len(refs) != 1:
            raise GridError(f"grid must have exactly one reference bus, found {len(refs)}")
        for br in self.branches:
            for b in (br.from_bus, br.to_bus):
                if b not in self._bus_index:
                    raise GridError(f"branch {br.id}: unknown bus {b!r}")
            if br.rating_mva <= 0:
                raise GridError(f"branch {br.id}: rating must be > 0")
            if abs(br.r_pu) < 1e-12 and abs(br.x_pu) < 1e-12:
                raise GridError(f"branch {br.id}: zero series impedance")
        self._check_connected()

    def _check_connected(self):
        n = len(self.buses)
        seen = {0}
        frontier = [0]
        adj: dict[int, list[int]] = {i: [] for i in range(n)}
        for br in self.branches:
            f, t = self._bus_index[br.from_bus], self._bus_index[br.to_bus]
            adj[f].append(t)
            adj[t].append(f)
        while frontier:
            i = frontier.pop()
            for j in adj[i]:
                if j not in seen:
                    seen.add(j)
                    frontier.append(j)
        if len(seen) != n:
            missing = [self.buses[i].id for i in range(n) if i not in seen]
            raise GridError(f"grid is not connected; unreachable buses: {missing}")

    def bus_index(self, bus_id: str) -> int:
        return self._bus_index[bus_id]

    @property
    def slack_index(self) -> int:
        return next(i for i, b in enumerate(self.buses) if b.type == "reference")

    @property
    def lines(self) -> list[Branch]:
        return [b for b in self.branches if b.kind == "line"]

    @property
    def trafos(self) -> list[Branch]:
        return [b for b in self.branches if b.kind == "trafo"]


def build_admittance(grid: ElectricGrid) -> np.ndarray:
    """Dense complex nodal admittance matrix Y = G + jB in per-unit."""
    n = len(grid.buses)
    Y = np.zeros((n, n), dtype=complex)
    for br in grid.branches:
        f, t = grid.bus_index(br.from_bus), grid.bus_index(br.to_bus)
        y = 1.0 / complex(br.r_pu, br.x_pu)
        ysh = complex(0.0, br.b_shunt_pu / 2.0)
        Y[f, f] += y + ysh
        Y[t, t] += y + ysh
        Y[f, t] -= y
        Y[t, f] -= y
    return Y


def _read_csv(path: Path) -> list[dict[str, str]]:
    if not path.exists():
        raise GridError(f"missing file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def load_grid(path: str | Path, s_base_mva: float = DEFAULT_S_BASE_MVA) -> ElectricGrid:
    root = Path(path)
    if not root.is_dir():
        raise GridError(f"grid directory not found: {root}")

    buses = [
        Bus(r["id"], float(r["vn_kv"]), r["type"].strip().lower())
        for r in _read_csv(root / "buses.csv")
    ]
    bus_kv = {b.id: b.vn_kv for b in buses}

    branches: list[Branch] = []
    for r in _read_csv(root / "lines.csv"):
        kv = bus_kv.get(r["from_bus"])
        if kv is None:
            raise GridError(f"lines.csv line {r['id']}: unknown from_bus {r['from_bus']!r}")
        z_base = kv * kv / s_base_mva
        branches.append(
            Branch(
                id=r["id"],
                from_bus=r["from_bus"],
                to_bus=r["to_bus"],
                r_pu=float(r["r_ohm"]) / z_base,
                x_pu=float(r["x_ohm"]) / z_base,
                b_shunt_pu=float(r.get("b_us") or 0.0) * 1e-6 * z_base,
                rating_mva=float(r["rating_mva"]),
                kind="line",
            )
        )
    trafo_path = root / "trafos.csv"
    if trafo_path.exists():
        for r in _read_csv(trafo_path):
            branches.append(
                Branch(
                    id=r["id"],
                    from_bus=r["hv_bus"],
                    to_bus=r["lv_bus"],
                    r_pu=float(r["r_pu"]),
                    x_pu=float(r["x_pu"]),
                    b_shunt_pu=0.0,
                    rating_mva=float(r["rating_mva"]),
                    kind="trafo",
                )
            )

    grid = ElectricGrid(buses=buses, branches=branches, s_base_mva=s_base_mva)

    profile_dir = root / "baseline_profiles"
    if profile_dir.is_dir():
        load = gen = None
        for i, bus in enumerate(buses):
            p = profile_dir / f"{bus.id}.csv"
            if not p.exists():
                continue
            rows = _read_csv(p)
            if load is None:
                load = np.zeros((len(buses), len(rows)))
                gen = np.zeros((len(buses), len(rows)))
            if len(rows) != load.shape[1]:
                raise GridError(f"{p}: profile length {len(rows)} != {load.shape[1]}")
            load[i] = [float(r.get("p_load_mw") or 0.0) for r in rows]
            gen[i] = [float(r.get("p_gen_mw") or 0.0) for r in rows]
        grid.baseline_load = load
        grid.baseline_gen = gen
    return grid
