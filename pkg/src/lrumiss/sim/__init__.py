"""Brute-force ground truth: IRM traces, LRU simulation and measured curves."""
from ._accel import BACKEND
from .analysis import (
    Curve,
    DistanceCcdf,
    TraceSummary,
    log_grid,
    lru_misses,
    reref_ccdf,
    reref_distances,
    simulate_lru,
    stack_ccdf,
    stack_distances,
    summarize,
    ws_sliding_window,
    ws_steady_state,
)
from .trace import MAGIC, Trace, TraceFormatError, generate_irm_trace, read_trace, write_trace

__all__ = [
    "BACKEND", "Curve", "DistanceCcdf", "MAGIC", "Trace", "TraceFormatError", "TraceSummary",
    "generate_irm_trace", "log_grid", "lru_misses", "read_trace", "reref_ccdf",
    "reref_distances", "simulate_lru", "stack_ccdf", "stack_distances", "summarize",
    "write_trace", "ws_sliding_window", "ws_steady_state",
]
