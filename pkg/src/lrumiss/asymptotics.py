"""Limiting regimes of the LRU miss-rate closed form.

Large caches (``delta`` near 1) and small caches (``delta`` near 0) admit
simple expressions that recover the Jelenkovic and Fill asymptotics.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import PowerLaw, ws_analytic
from .specfun import EULER_GAMMA, INTEGER_TOL, DomainError, harmonic, zeta

SMALL_CACHE_MAX = 0.1
LARGE_CACHE_MIN = 0.5
SLOPE_FIT_LO = 1e-8
SLOPE_FIT_HI = 1e-6


class RegimeKind(enum.Enum):
    LARGE_CACHE = "large"
    SMALL_CACHE = "small"


@dataclass(frozen=True)
class Regime:
    kind: RegimeKind
    a: float
    delta: float
    N: Optional[int] = None

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise DomainError(f"cache ratio must lie in (0, 1), got {self.delta}")
        if not (math.isfinite(self.a) and self.a >= 0):
            raise DomainError(f"exponent must be finite and >= 0, got {self.a}")
        if self.N is not None and self.N < 1:
            raise DomainError(f"alphabet size must be >= 1, got {self.N}")


def lru_mr_large_cache(regime: Regime, asymptotic: bool = False) -> float:
    """Large-cache miss rate ``N**(1-a) (1 - delta) / H_{N,a}``.

    With ``N`` omitted (or ``asymptotic=True``) the ``N -> inf`` reduction is
    used: ``(1-delta)(1-a)`` below a = 1, ``(1-delta)/ln N`` at a = 1 and
    ``N**(1-a)(1-delta)/zeta(a)`` above.
    """
    if regime.kind is not RegimeKind.LARGE_CACHE:
        raise DomainError("regime is not a large-cache regime")
    a, delta, N = regime.a, regime.delta, regime.N
    if delta < LARGE_CACHE_MIN:
        raise DomainError(f"large-cache form needs delta >= {LARGE_CACHE_MIN}, got {delta}")
    if N is not None and not asymptotic:
        return N ** (1.0 - a) * (1.0 - delta) / harmonic(N, a)
    if a < 1.0 - INTEGER_TOL:
        return (1.0 - delta) * (1.0 - a)
    if N is None:
        raise DomainError("alphabet size is required for a >= 1")
    if abs(a - 1.0) < INTEGER_TOL:
        return (1.0 - delta) / math.log(N)
    return N ** (1.0 - a) * (1.0 - delta) / zeta(a)


def ratio_large_cache(a: float, delta: float) -> float:
    """LRU/static ratio for large caches; independent of ``N``."""
    if not 0.0 < delta < 1.0:
        raise DomainError(f"cache ratio must lie in (0, 1), got {delta}")
    if abs(a - 1.0) < INTEGER_TOL:
        return (1.0 - delta) / -math.log(delta)
    # 1 - delta**(1-a) written with expm1 to stay smooth through a = 1
    return (1.0 - delta) * (1.0 - a) / -math.expm1((1.0 - a) * math.log(delta))


def jelenkovic_constant(a: float) -> float:
    """Small-cache LRU/static ratio ``(1 - 1/a) Gamma(1 - 1/a)**a`` for ``a > 1``."""
    a = float(a)
    if not a > 1.0:
        raise DomainError(f"Jelenkovic constant needs a > 1, got {a}")
    s = 1.0 - 1.0 / a
    return s * math.exp(a * math.lgamma(s))


def lru_mr_small_cache(a: float, delta: float, N: Optional[int] = None) -> float:
    """Small-cache (``delta <= 0.1``) asymptotic LRU miss rate.

    ===============  ==================================================
    ``a > 1``        ``Gamma(1-1/a)**a / (a zeta(a) D**(a-1))``, D = delta N
    ``a = 1``        ``1 - ln D / ln N``
    ``1/2 < a < 1``  ``1 - delta**(1/a-1) (1-a)**(1/a-1) Gamma(2-1/a)``
    ``a = 1/2``      ``1 + (delta/2)(ln(delta/2) + gamma - 1)``
    ``0 < a < 1/2``  ``1 - delta (1-a)**2 / (1-2a)``
    ===============  ==================================================
    """
    a = float(a)
    delta = float(delta)
    if not a > 0:
        raise DomainError(f"exponent must be > 0, got {a}")
    if not 0.0 < delta <= SMALL_CACHE_MAX:
        raise DomainError(f"small-cache form needs 0 < delta <= {SMALL_CACHE_MAX}, got {delta}")
    if a > 1.0 - INTEGER_TOL and N is None:
        raise DomainError("alphabet size is required for a >= 1")
    if abs(a - 1.0) < INTEGER_TOL:
        return 1.0 - math.log(delta * N) / math.log(N)
    if a > 1.0:
        D = delta * N
        return math.exp(a * math.lgamma(1.0 - 1.0 / a)) / (a * zeta(a) * D ** (a - 1.0))
    if abs(a - 0.5) < INTEGER_TOL:
        half = delta / 2.0
        return 1.0 + half * (math.log(half) + EULER_GAMMA - 1.0)
    if a > 0.5:
        q = 1.0 / a - 1.0
        return 1.0 - (delta * (1.0 - a)) ** q * math.gamma(2.0 - 1.0 / a)
    return 1.0 - delta * (1.0 - a) ** 2 / (1.0 - 2.0 * a)


def ws_loglog_slope_origin(a: float) -> float:
    """Slope of ``ln WS`` against ``ln D`` as ``D -> 0``: 1 up to a = 1, then 1/a."""
    if not a >= 0:
        raise DomainError(f"exponent must be >= 0, got {a}")
    return 1.0 if a <= 1.0 else 1.0 / a


def ws_loglog_slope_local(law: PowerLaw, D: float, rel: float = 1e-3) -> float:
    """Central-difference slope of ``ln ws_analytic`` against ``ln D`` at ``D``."""
    if not D > 0:
        raise DomainError(f"window must be > 0, got {D}")
    h = math.log1p(rel)
    lo = ws_analytic(law, D * math.exp(-h))
    hi = ws_analytic(law, D * math.exp(h))
    return (math.log(hi) - math.log(lo)) / (2.0 * h)


def ws_loglog_slope_fit(law: PowerLaw, D_lo: float = SLOPE_FIT_LO,
                        D_hi: float = SLOPE_FIT_HI, points: int = 41) -> float:
    """Least-squares slope of ``ln WS`` against ``ln D`` over ``[D_lo, D_hi]``.

    The closed form is continuous in ``D``, so the origin slope is read off
    well below one access where the ``a = 1`` logarithmic correction is small.
    """
    if not 0 < D_lo < D_hi:
        raise DomainError(f"need 0 < D_lo < D_hi, got {D_lo}, {D_hi}")
    D = np.geomspace(D_lo, D_hi, points)
    ws = np.array([ws_analytic(law, d) for d in D])
    return float(np.polyfit(np.log(D), np.log(ws), 1)[0])
