"""Measured curves from a trace: distance CCDFs, LRU miss rates, working sets."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .trace import Trace

DEFAULT_BINNING = 0.001


@dataclass(frozen=True)
class Curve:
    """Samples ``y(x)``; ``meta`` records how they were produced."""

    x: np.ndarray
    y: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if np.shape(self.x) != np.shape(self.y):
            raise ValueError("x and y must have the same shape")

    def __len__(self) -> int:
        return len(self.x)

    def at(self, x) -> np.ndarray:
        """Values at sample points ``x`` (which must be present)."""
        idx = np.searchsorted(self.x, x)
        if np.any(idx >= len(self.x)) or np.any(self.x[np.minimum(idx, len(self.x) - 1)] != x):
            raise KeyError(f"{x} is not a sample point")
        return self.y[idx]


@dataclass(frozen=True, eq=False)
class DistanceCcdf:
    """Integer-backed CCDF of per-access distances; cold accesses count as infinite.

    ``ge[d]`` is the number of warm accesses with distance ``>= d`` for
    ``d = 0 .. max + 1``.  Re-reference CCDFs also carry ``lookback_ge`` and
    ``span``, which give the stationary estimate used for working sets.
    """

    ge: np.ndarray
    cold: int
    lookback_ge: Optional[np.ndarray] = None
    span: tuple = (0, 0)
    distinct: Optional[int] = None

    @classmethod
    def from_distances(cls, dist: np.ndarray) -> "DistanceCcdf":
        warm = dist[dist >= 0]
        hist = np.bincount(warm) if warm.size else np.zeros(0, np.int64)
        ge = np.concatenate((np.cumsum(hist[::-1])[::-1], [0])).astype(np.int64)
        return cls(ge, int(dist.shape[0] - warm.shape[0]))

    @property
    def warm(self) -> int:
        return int(self.ge[0])

    @property
    def total(self) -> int:
        return self.warm + self.cold

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.ge.shape[0])

    @property
    def values(self) -> np.ndarray:
        return (self.ge + self.cold) / self.total

    def count_at(self, D):
        """Accesses with distance ``>= D``, cold included."""
        D = np.asarray(D, dtype=np.int64)
        if np.any(D < 0):
            raise ValueError("distance must be >= 0")
        ge = self.ge[np.minimum(D, self.ge.shape[0] - 1)]
        out = ge + self.cold
        return int(out) if out.ndim == 0 else out

    def __call__(self, D):
        return np.asarray(self.count_at(D)) / self.total

    def stationary_ccdf(self, X):
        """Censoring-free estimate of ``P[distance >= X]``.

        Only accesses with at least ``X`` earlier accesses behind them are
        counted, and a cold one among them certainly has distance ``>= X``.
        Zero where no access has that much history.
        """
        if self.lookback_ge is None:
            raise ValueError("no look-back counts; build the CCDF with reref_ccdf")
        X = np.asarray(X, dtype=np.int64)
        first, end = self.span
        at_risk = end - np.maximum(first, X)
        ge = self.lookback_ge[np.minimum(X, self.lookback_ge.shape[0] - 1)]
        return np.where(at_risk > 0, ge / np.maximum(at_risk, 1), 0.0)

    def warm_ccdf(self, D):
        """CCDF over warm accesses only (the steady-state view)."""
        D = np.minimum(np.asarray(D, dtype=np.int64), self.ge.shape[0] - 1)
        return self.ge[D] / max(self.warm, 1)


@dataclass(frozen=True)
class TraceSummary:
    distinct: int
    reref: DistanceCcdf
    stack: DistanceCcdf
    ws_steady: Curve
    ws_window: Optional[Curve] = None


def reref_distances(trace: Trace) -> np.ndarray:
    """Accesses strictly between consecutive uses of the same id; -1 when cold."""
    prev = kernels.previous_occurrence(trace.accesses, trace.alphabet)
    out = np.arange(trace.length, dtype=np.int64) - prev - 1
    out[prev < 0] = kernels.COLD
    return out


def stack_distances(trace: Trace) -> np.ndarray:
    """Distinct other ids between consecutive uses of the same id; -1 when cold."""
    prev = kernels.previous_occurrence(trace.accesses, trace.alphabet)
    return kernels.stack_distances(prev)


def _check_warmup(trace: Trace, warmup: int) -> int:
    if not 0 <= warmup < trace.length:
        raise ValueError(f"warmup must lie in [0, {trace.length}), got {warmup}")
    return int(warmup)


def reref_ccdf(trace: Trace, warmup: int = 0) -> DistanceCcdf:
    """Re-reference CCDF over accesses at index ``>= warmup``."""
    start = _check_warmup(trace, warmup)
    full = reref_distances(trace)
    dist = full[start:]
    base = DistanceCcdf.from_distances(dist)
    # distance as far as the trace can tell: capped by the history before t
    t = np.arange(start, trace.length, dtype=np.int64)
    seen = np.where(dist < 0, t, np.minimum(dist, t))
    lookback = np.concatenate((np.cumsum(np.bincount(seen)[::-1])[::-1], [0]))
    return DistanceCcdf(base.ge, base.cold, lookback, (start, trace.length),
                        int(np.count_nonzero(full < 0)))


def stack_ccdf(trace: Trace, warmup: int = 0) -> DistanceCcdf:
    """Stack-distance CCDF; ``count_at(D)`` is the LRU miss count at size D.

    With ``warmup > 0`` only accesses from that index on are counted.  The
    cache state still evolves over the whole trace, so a cold access after
    the warm-up has stack distance at least ``distinct(trace[:warmup])`` and
    the result is the steady-state miss curve for every D up to that count.
    """
    return DistanceCcdf.from_distances(stack_distances(trace)[_check_warmup(trace, warmup):])


def lru_misses(trace: Trace, D: int, warmup: int = 0) -> int:
    if D < 1:
        raise ValueError(f"cache size must be >= 1, got {D}")
    start = _check_warmup(trace, warmup)
    return int(kernels.lru_misses(trace.accesses, trace.alphabet, int(D), start))


def simulate_lru(trace: Trace, D: int, warmup: int = 0) -> float:
    """Miss rate of a fully-associative LRU cache of ``D`` lines.

    Cold misses count.  Misses before index ``warmup`` are not recorded and
    the rate is taken over the remaining ``length - warmup`` accesses.
    """
    return lru_misses(trace, D, warmup) / (trace.length - warmup)


def ws_steady_state(reref: DistanceCcdf, D_max: int) -> Curve:
    """``WS(D) = sum_{X < D} P_reref[X]`` for ``D = 1 .. D_max``.

    ``P_reref`` is the stationary estimate of :meth:`DistanceCcdf.stationary_ccdf`,
    so neither long gaps cut off by the trace ends nor cold accesses bias it.
    The sum is capped at the number of distinct ids in the trace.
    """
    if D_max < 1:
        raise ValueError(f"D_max must be >= 1, got {D_max}")
    ws = np.cumsum(reref.stationary_ccdf(np.arange(D_max)))
    if reref.distinct is not None:
        np.minimum(ws, max(reref.distinct, 1), out=ws)
    return Curve(np.arange(1, D_max + 1), ws, {"source": "steady-state"})


def log_grid(upper: int, binning: float = DEFAULT_BINNING) -> np.ndarray:
    """Distinct integers ``round(10**k)`` for ``k = 0, binning, ...`` up to ``upper``."""
    if not binning > 0:
        raise ValueError(f"binning must be > 0, got {binning}")
    if upper < 1:
        return np.zeros(0, np.int64)
    k = np.arange(0.0, np.log10(upper) + binning / 2, binning)
    D = np.unique(np.rint(10.0 ** k).astype(np.int64))
    return D[D <= upper]


def ws_sliding_window(trace: Trace, binning: float = DEFAULT_BINNING,
                      D: Optional[np.ndarray] = None) -> Curve:
    """Mean distinct ids over every length-D window, on a log grid of widths.

    Every window start is counted (stride 1) at any trace length.
    """
    L = trace.length
    D = log_grid(L, binning) if D is None else np.asarray(D, dtype=np.int64)
    if np.any((D < 1) | (D > L)):
        raise ValueError(f"window widths must lie in [1, {L}]")
    prev = kernels.previous_occurrence(trace.accesses, trace.alphabet)
    totals = kernels.window_distinct_totals(prev, D)
    return Curve(D, totals / (L - D + 1), {"source": "sliding-window", "stride": 1,
                                           "binning": binning})


def summarize(trace: Trace, D_max: Optional[int] = None, window: bool = True,
              binning: float = DEFAULT_BINNING) -> TraceSummary:
    reref = reref_ccdf(trace)
    D_max = D_max or trace.length
    return TraceSummary(
        distinct=int(np.unique(trace.accesses).shape[0]),
        reref=reref,
        stack=stack_ccdf(trace),
        ws_steady=ws_steady_state(reref, D_max),
        ws_window=ws_sliding_window(trace, binning) if window else None,
    )
