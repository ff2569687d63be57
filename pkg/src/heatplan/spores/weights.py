"""Evolving-average weight state driving the diversification objective."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

OMEGA_MIN = 1e-3
OMEGA_MAX = 1e3


@dataclass
class WeightState:
    """Per capacity-variable running mean and current weight.

    `history` keeps every observed capacity vector so stored weights can be
    recomputed from scratch for auditing.
    """

    num_entries: int
    count: int = 0
    mean: np.ndarray = field(default=None)  # type: ignore[assignment]
    omega: np.ndarray = field(default=None)  # type: ignore[assignment]
    history: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        if self.mean is None:
            self.mean = np.zeros(self.num_entries)
        if self.omega is None:
            self.omega = np.ones(self.num_entries)


def raw_weight(prev_mean: float, new_value: float) -> float:
    """Inverse relative deviation from the running mean, before clamping.

    Degenerate cases are mapped, never raised: zero deviation gives inf
    (clamped to the max), a zero mean with a nonzero new value gives 0
    (clamped to the min), and an all-zero pair stays neutral at 1.
    """
    prev_mean = float(prev_mean)
    new_value = float(new_value)
    if prev_mean == 0.0:
        return 1.0 if new_value == 0.0 else 0.0
    dev = abs((prev_mean - new_value) / prev_mean)
    if dev == 0.0:
        return float("inf")
    return 1.0 / dev


def update_weights_evolving_average(state: WeightState, capacities: np.ndarray) -> WeightState:
    """Fold one solution into the state; returns a new state with fresh weights.

    The first update seeds the mean from the reference solution and leaves
    the weights neutral.
    """
    caps = np.asarray(capacities, dtype=float)
    if caps.shape != (state.num_entries,):
        raise ValueError(f"expected {state.num_entries} capacities, got {caps.shape}")
    history = state.history + [caps.copy()]
    if state.count == 0:
        return WeightState(
            num_entries=state.num_entries,
            count=1,
            mean=caps.copy(),
            omega=np.ones(state.num_entries),
            history=history,
        )
    raw = np.array([raw_weight(m, y) for m, y in zip(state.mean, caps)])
    omega = np.clip(raw, OMEGA_MIN, OMEGA_MAX)
    n = state.count + 1
    mean = (state.mean * state.count + caps) / n
    return WeightState(
        num_entries=state.num_entries, count=n, mean=mean, omega=omega, history=history
    )
