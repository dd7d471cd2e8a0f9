"""Kernel backend selection.

``LRUMISS_BACKEND=numpy`` forces the pure-numpy kernels; the default is
``numba`` when it imports, else numpy.
"""
from __future__ import annotations

import os

ENV_VAR = "LRUMISS_BACKEND"
BACKENDS = ("numba", "numpy")

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None


def _requested() -> str:
    name = os.environ.get(ENV_VAR, "numba").strip().lower() or "numba"
    if name not in BACKENDS:
        raise ValueError(f"{ENV_VAR} must be one of {BACKENDS}, got {name!r}")
    return name


BACKEND = "numba" if _requested() == "numba" and HAVE_NUMBA else "numpy"


def njit(fn):
    """``numba.njit(cache=True)`` when numba is present, identity otherwise."""
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True)(fn)
