from .model import (
    TECHNOLOGY_KINDS,
    CarrierPrices,
    HeatNode,
    HeatSystem,
    SnapshotIndex,
    TechnologyAsset,
    ValidationError,
    WeatherInputs,
)
from .physics import annuity_factor, heat_pump_cop
from .io import load_heat_system, load_scenario, ScenarioConfig

__all__ = [
    "TECHNOLOGY_KINDS",
    "CarrierPrices",
    "HeatNode",
    "HeatSystem",
    "SnapshotIndex",
    "TechnologyAsset",
    "ValidationError",
    "WeatherInputs",
    "annuity_factor",
    "heat_pump_cop",
    "load_heat_system",
    "load_scenario",
    "ScenarioConfig",
]
