from .overload import (
    DEFAULT_LIMIT_PERCENT,
    DEFAULT_WINDOW,
    loading_percentile_summary,
    overloaded_component_share,
    persistent_overload_events,
    total_overload_events,
)
from .space import (
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

__all__ = [
    "DEFAULT_LIMIT_PERCENT",
    "DEFAULT_WINDOW",
    "loading_percentile_summary",
    "overloaded_component_share",
    "persistent_overload_events",
    "total_overload_events",
    "DecisionSpace",
    "GridMetrics",
    "HeatMetrics",
    "Predicate",
    "Row",
    "assemble_decision_space",
    "export_bundle",
    "export_csv",
    "filter_constraints",
    "grid_metrics",
    "heat_metrics",
    "lower_envelope",
]
