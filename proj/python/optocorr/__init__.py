"""Steady-state entanglement and Gaussian discord of a two-cavity optomechanical system.

Covariances use vacuum variance 1/2 and mode order (X1, Y1, X2, Y2, q, p).
Discord is in nats and measures the second mode of the pair label
(mo1, mo2 or o1o2).
"""

from ._core import (
    OptocorrError,
    analyze_pair,
    presets,
    run_config,
    run_preset,
    solve_point,
    thermal_occupancy,
    thermal_temperature,
)

__all__ = [
    "OptocorrError",
    "analyze_pair",
    "presets",
    "run_config",
    "run_preset",
    "solve_point",
    "thermal_occupancy",
    "thermal_temperature",
]
