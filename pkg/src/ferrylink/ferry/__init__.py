"""Discrete-time simulator of the 8-state mobile-relay loop."""

from .params import FerryParams, SimState, initial_state
from .engine import active_engine_name, available_engines
from .sim import FerryMetrics, Trace, run, run_stationary, step

__all__ = [
    "FerryParams", "SimState", "initial_state", "step",
    "Trace", "FerryMetrics", "run", "run_stationary",
    "available_engines", "active_engine_name",
]
