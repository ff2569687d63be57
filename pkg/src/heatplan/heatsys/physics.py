"""Closed-form technology relations: annuity factor and heat-pump COP."""

from __future__ import annotations

import numpy as np

# COP(dT) = a0 + a1*dT + a2*dT^2, dT = T_sink - T_source in K.
# Note: the positive linear coefficient makes COP grow with temperature lift,
# which is physically suspect; it is kept as the documented default and is
# overridable per system (cop_coefficients).
DEFAULT_COP_COEFFICIENTS = (6.81, 0.121, 0.000630)


def annuity_factor(lifetime: float, discount_rate: float) -> float:
    """Factor dividing an overnight investment to get equivalent annual payments.

    (1 - (1 + tau)^-n) / tau for tau > 0; the analytic limit n at tau = 0.
    """
    if lifetime < 1:
        raise ValueError(f"lifetime must be >= 1 year, got {lifetime}")
    if discount_rate < 0:
        raise ValueError(f"discount rate must be >= 0, got {discount_rate}")
    if discount_rate == 0:
        return float(lifetime)
    return (1.0 - (1.0 + discount_rate) ** (-lifetime)) / discount_rate


def heat_pump_cop(delta_t, coefficients=DEFAULT_COP_COEFFICIENTS):
    """COP polynomial in the sink-source temperature difference (K).

    Accepts a scalar or an array of temperature differences. A resulting
    COP <= 1 marks a non-physical configuration and raises.
    """
    a0, a1, a2 = coefficients
    dt = np.asarray(delta_t, dtype=float)
    cop = a0 + a1 * dt + a2 * dt * dt
    if np.any(cop <= 1.0):
        bad = np.atleast_1d(dt)[np.atleast_1d(cop) <= 1.0][0]
        raise ValueError(
            f"COP <= 1 at delta_T={bad:g} K with coefficients {coefficients}: "
            "non-physical configuration"
        )
    if np.ndim(delta_t) == 0:
        return float(cop)
    return cop
