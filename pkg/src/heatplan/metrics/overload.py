"""Loading-series statistics: persistent overload events and percentile summary."""

from __future__ import annotations

import numpy as np

DEFAULT_LIMIT_PERCENT = 110.0
DEFAULT_WINDOW = 7


def persistent_overload_events(
    loading: np.ndarray, limit: float = DEFAULT_LIMIT_PERCENT, window: int = DEFAULT_WINDOW
) -> int:
    """Count maximal consecutive runs of loading > limit lasting >= window snapshots.

    Each maximal run counts once regardless of its length. NaN entries
    (diverged snapshots) break runs.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    arr = np.asarray(loading, dtype=float)
    if arr.size == 0:
        return 0
    above = np.where(np.isnan(arr), False, arr > limit)
    events = 0
    run = 0
    for flag in above:
        if flag:
            run += 1
        else:
            if run >= window:
                events += 1
            run = 0
    if run >= window:
        events += 1
    return events


def loading_percentile_summary(
    loading_matrix: np.ndarray,
    *,
    time_percentile: float = 90.0,
    component_percentile: float = 75.0,
) -> float:
    """Percentile-of-percentiles loading statistic.

    Per component: the time_percentile loading over time (NaN snapshots
    ignored); then the component_percentile across components. Linear
    interpolation throughout. Components with no converged snapshot are
    excluded.
    """
    m = np.atleast_2d(np.asarray(loading_matrix, dtype=float))  # (T, n_components)
    per_component = []
    for j in range(m.shape[1]):
        col = m[:, j]
        col = col[~np.isnan(col)]
        if col.size:
            per_component.append(np.percentile(col, time_percentile))
    if not per_component:
        raise ValueError("no component has a converged snapshot")
    return float(np.percentile(per_component, component_percentile))


def overloaded_component_share(
    loading_matrix: np.ndarray, limit: float = DEFAULT_LIMIT_PERCENT, window: int = DEFAULT_WINDOW
) -> float:
    """Percent of components with at least one persistent overload event."""
    m = np.atleast_2d(np.asarray(loading_matrix, dtype=float))
    n = m.shape[1]
    if n == 0:
        return 0.0
    hit = sum(1 for j in range(n) if persistent_overload_events(m[:, j], limit, window) > 0)
    return 100.0 * hit / n


def total_overload_events(
    loading_matrix: np.ndarray, limit: float = DEFAULT_LIMIT_PERCENT, window: int = DEFAULT_WINDOW
) -> int:
    """Persistent overload events summed over all components."""
    m = np.atleast_2d(np.asarray(loading_matrix, dtype=float))
    return sum(persistent_overload_events(m[:, j], limit, window) for j in range(m.shape[1]))
