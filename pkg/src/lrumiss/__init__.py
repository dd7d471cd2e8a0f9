"""Closed-form LRU miss rates under the independent reference model.

Power-law popularity, the Fagin/Che approximation written with generalized
exponential integrals, limiting regimes, the LRU/static ratio family, and a
trace simulator to check all of it.
"""
from .model import PowerLaw, lru_mr, predict, static_mr, ws_analytic, ws_inverse
from .ratio import find_max, ratio_at_delta, ratio_value
from .specfun import DomainError, expint, expint_inv

__version__ = "0.1.0"

__all__ = [
    "DomainError", "PowerLaw", "expint", "expint_inv", "find_max", "lru_mr", "predict",
    "ratio_at_delta", "ratio_value", "static_mr", "ws_analytic", "ws_inverse",
]
