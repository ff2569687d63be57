from .generate import (
    RunSpec,
    Spore,
    SporeSet,
    SporesConfig,
    TARGET_GROUPS,
    build_spores_objective,
    default_runs,
    generate_all,
    generate_batch,
    load_spore_set,
    parse_runs,
    save_spore_set,
)
from .weights import OMEGA_MAX, OMEGA_MIN, WeightState, raw_weight, update_weights_evolving_average

__all__ = [
    "RunSpec",
    "Spore",
    "SporeSet",
    "SporesConfig",
    "TARGET_GROUPS",
    "build_spores_objective",
    "default_runs",
    "generate_all",
    "generate_batch",
    "load_spore_set",
    "parse_runs",
    "save_spore_set",
    "OMEGA_MAX",
    "OMEGA_MIN",
    "WeightState",
    "raw_weight",
    "update_weights_evolving_average",
]
