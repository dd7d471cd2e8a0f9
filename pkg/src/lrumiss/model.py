"""IRM analytic model of a fully-associative LRU cache under power-law popularity.

All closed forms treat rank as a continuous variable on ``[0, N]``; the
``*_discrete`` functions keep the exact finite sums and serve as oracles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .specfun import (
    INTEGER_TOL,
    DomainError,
    expint,
    expint_deficit,
    expint_deficit_inv,
    harmonic,
)

_CLAMP_SLACK = 1e-6


@dataclass(frozen=True)
class PowerLaw:
    """Popularity ``p_i = norm / i**a`` over ranks ``1..N``."""

    a: float
    N: int
    H: float = field(init=False)

    def __post_init__(self):
        a = float(self.a)
        if not (math.isfinite(a) and a >= 0):
            raise DomainError(f"exponent must be finite and >= 0, got {self.a}")
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"alphabet size must be a positive integer, got {self.N}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "H", harmonic(self.N, a))

    @property
    def norm(self) -> float:
        return 1.0 / self.H

    @property
    def is_uniform(self) -> bool:
        return abs(self.a) < INTEGER_TOL

    @property
    def is_zipf(self) -> bool:
        return abs(self.a - 1.0) < INTEGER_TOL

    def probabilities(self) -> np.ndarray:
        ranks = np.arange(1, self.N + 1, dtype=float)
        return ranks ** (-self.a) / self.H

    def cdf(self) -> np.ndarray:
        c = np.cumsum(self.probabilities())
        c[-1] = 1.0
        return c

    def scale(self) -> float:
        """Window scale ``H N**a``: the closed forms depend on ``D / scale``."""
        return self.H * self.N ** self.a


@dataclass(frozen=True)
class CacheSize:
    D: float
    delta: float

    @classmethod
    def of(cls, law: PowerLaw, D: float) -> "CacheSize":
        return cls(float(D), float(D) / law.N)

    @classmethod
    def from_ratio(cls, law: PowerLaw, delta: float) -> "CacheSize":
        return cls(float(delta) * law.N, float(delta))


@dataclass(frozen=True)
class PredictionRow:
    D: float
    ws: float
    preref: float
    mr_lru: float
    mr_static: float
    ratio: float


def _size(law: PowerLaw, size) -> float:
    return size.D if isinstance(size, CacheSize) else float(size)


def _clamp(value: float, what: str) -> float:
    if not math.isfinite(value):
        raise ArithmeticError(f"{what} evaluated to {value}")
    if value < -_CLAMP_SLACK:
        raise ArithmeticError(f"{what} = {value} is negative")
    return min(max(value, 0.0), 1.0)


# --- exact finite sums -----------------------------------------------------

def preref_ccdf_discrete(law: PowerLaw, D: int) -> float:
    """``sum_i p_i (1 - p_i)**D``: probability of D or more accesses between reuses."""
    if D < 0:
        raise DomainError(f"distance must be >= 0, got {D}")
    p = law.probabilities()
    return float(np.sum(p * np.power(1.0 - p, D)))


def ws_discrete(law: PowerLaw, D: int) -> float:
    """``sum_i 1 - (1 - p_i)**D``: expected distinct addresses in D accesses."""
    if D < 0:
        raise DomainError(f"window must be >= 0, got {D}")
    if D == 0:
        return 0.0
    p = law.probabilities()
    with np.errstate(divide="ignore"):
        decay = D * np.log1p(-p)
    return float(-np.sum(np.expm1(decay)))


# --- continuous closed forms -----------------------------------------------

def preref_analytic(law: PowerLaw, D: float) -> float:
    """Re-reference CCDF with rank integrated over ``[0, N]``."""
    D = float(D)
    if not D > 0:
        raise DomainError(f"distance must be > 0, got {D}")
    N, a = law.N, law.a
    if law.is_uniform:
        return math.exp(-D / N)
    z = D / law.scale()
    if law.is_zipf:
        return expint(1.0, z) / law.H
    return N ** (1.0 - a) / (law.H * a) * expint(1.0 / a, z)


def ws_analytic(law: PowerLaw, D: float) -> float:
    """Working-set function; its derivative is :func:`preref_analytic`."""
    D = float(D)
    if D < 0:
        raise DomainError(f"window must be >= 0, got {D}")
    if D == 0:
        return 0.0
    N, a = law.N, law.a
    if law.is_uniform:
        return -N * math.expm1(-D / N)
    z = D / law.scale()
    if law.is_zipf:
        return N * expint_deficit(2.0, z)
    return N * expint_deficit(1.0 + 1.0 / a, z) / a


def _inverse_argument(law: PowerLaw, D: float) -> float:
    """``z`` with ``ws_analytic(law, z * scale) = D``."""
    N, a = law.N, law.a
    if not 0 < D < N:
        raise DomainError(f"size must lie in (0, N={N}), got {D}")
    if law.is_zipf:
        return expint_deficit_inv(2.0, D / N)
    return expint_deficit_inv(1.0 + 1.0 / a, a * D / N)


def ws_inverse(law: PowerLaw, D: float) -> float:
    """Window length whose expected working set equals ``D`` (``0 < D < N``)."""
    D = _size(law, D)
    N = law.N
    if not 0 < D < N:
        raise DomainError(f"size must lie in (0, N={N}), got {D}")
    if law.is_uniform:
        return -N * math.log1p(-D / N)
    return _inverse_argument(law, D) * law.scale()


def che_characteristic_time(law: PowerLaw, C: float) -> float:
    """Characteristic time ``tau`` solving ``sum_n 1 - exp(-q_n tau) = C``."""
    return ws_inverse(law, C)


def lru_mr_raw(law: PowerLaw, size) -> float:
    """Unclamped Fagin/Che miss rate ``P_reref[WS^{-1}(D)]``."""
    D = _size(law, size)
    N, a = law.N, law.a
    if not 0 < D < N:
        raise DomainError(f"cache size must lie in (0, N={N}), got {D}")
    if law.is_uniform:
        return 1.0 - D / N
    z = _inverse_argument(law, D)
    if law.is_zipf:
        return expint(1.0, z) / law.H
    return N ** (1.0 - a) / (a * law.H) * expint(1.0 / a, z)


def lru_mr(law: PowerLaw, size) -> float:
    """LRU miss rate of a cache holding ``D`` lines, ``0 < D < N``.

    The continuous-rank model can exceed 1 for very small caches (mass of
    ranks below 1); the result is clamped into ``[0, 1]``.
    """
    return _clamp(lru_mr_raw(law, size), "lru_mr")


def static_mr(law: PowerLaw, size) -> float:
    """Miss rate when the ``D`` most popular lines are pinned (``0 < D <= N``)."""
    D = _size(law, size)
    N, a = law.N, law.a
    if not 0 < D <= N:
        raise DomainError(f"cache size must lie in (0, N={N}], got {D}")
    if law.is_zipf:
        value = (math.log(N) - math.log(D)) / law.H
    else:
        value = (N ** (1.0 - a) - D ** (1.0 - a)) / ((1.0 - a) * law.H)
    return _clamp(value, "static_mr")


def predict(law: PowerLaw, D: float) -> PredictionRow:
    D = float(D)
    mr = lru_mr(law, D)
    st = static_mr(law, D)
    return PredictionRow(
        D=D,
        ws=ws_analytic(law, D),
        preref=preref_analytic(law, D),
        mr_lru=mr,
        mr_static=st,
        ratio=mr / st if st > 0 else math.nan,
    )
