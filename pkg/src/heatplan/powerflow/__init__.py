from .engine import KERNEL
from .grid import Branch, Bus, ElectricGrid, GridError, build_admittance, load_grid
from .timeseries import (
    DEFAULT_POWER_FACTOR,
    FlowResult,
    InjectionSet,
    compute_loadings,
    run_timeseries,
    solve_snapshot,
)

__all__ = [
    "KERNEL",
    "Branch",
    "Bus",
    "ElectricGrid",
    "GridError",
    "build_admittance",
    "load_grid",
    "DEFAULT_POWER_FACTOR",
    "FlowResult",
    "InjectionSet",
    "compute_loadings",
    "run_timeseries",
    "solve_snapshot",
]
