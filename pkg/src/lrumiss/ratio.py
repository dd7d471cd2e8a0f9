"""The LRU/static miss-rate ratio family ``F_a(y)`` and its maximum.

With ``p = 1/a`` the cache ratio and the working variable ``y`` are tied by
``delta = 1 - p E_{p+1}(y)``, and

    F_a(y) = (p - 1) E_p(y) / (1 - delta**(1 - a)).

``a = 1`` and ``a = inf`` are the limits ``-E_1/ln(1 - E_2)`` and
``E_0 / (exp(E_1) - 1)``.  ``math.inf`` is accepted as the exponent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .asymptotics import jelenkovic_constant
from .specfun import (INTEGER_TOL, DomainError, expint, expint_deficit, expint_deficit_inv,
                      expint_scaled)

SEARCH_LO = 1e-6
SEARCH_HI = 50.0
SEARCH_TOL = 1e-8
TAIL_CUTOFF = 20.0
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class RatioPoint:
    a: float
    p: float
    y: float
    delta: float
    value: float


@dataclass(frozen=True)
class RatioMaximum:
    a: float
    y_star: float
    delta_star: float
    f_max: float
    y_approx: float
    jelenkovic: Optional[float] = None


def _check_exponent(a: float) -> float:
    a = float(a)
    if not a > 0 or math.isnan(a):
        raise DomainError(f"exponent must be > 0, got {a}")
    return a


def _is_one(a: float) -> bool:
    return abs(a - 1.0) < INTEGER_TOL


def _log_delta(p: float, y: float) -> float:
    """``ln(p (1/(p-1) - E_{p+1}(y)))`` accurate at both ends of ``delta``."""
    if p == 1.0:
        deficit, tail = expint_deficit(2.0, y), expint(2.0, y)
    else:
        deficit, tail = p * expint_deficit(p + 1.0, y), p * expint(p + 1.0, y)
    # 1 - delta = p E_{p+1}(y) when delta is close to 1
    return math.log1p(-tail) if deficit > 0.5 else math.log(deficit)


def delta_of_y(a: float, y: float) -> float:
    """Cache ratio ``1 - p E_{p+1}(y)`` reached at working variable ``y``."""
    a = _check_exponent(a)
    if math.isinf(a):
        raise DomainError("the cache-ratio mapping degenerates for an infinite exponent")
    if not y > 0:
        raise DomainError(f"y must be > 0, got {y}")
    if _is_one(a):
        return expint_deficit(2.0, y)
    p = 1.0 / a
    return p * expint_deficit(p + 1.0, y)


def y_of_delta(a: float, delta: float) -> float:
    """Inverse of :func:`delta_of_y`: ``E^{-1}_{p+1}(a (1 - delta))``."""
    a = _check_exponent(a)
    if math.isinf(a):
        raise DomainError("the cache-ratio mapping degenerates for an infinite exponent")
    if not 0.0 < delta < 1.0:
        raise DomainError(f"cache ratio must lie in (0, 1), got {delta}")
    if _is_one(a):
        return expint_deficit_inv(2.0, delta)
    p = 1.0 / a
    return expint_deficit_inv(p + 1.0, delta / p)


def _ratio_tail(a: float, y: float) -> float:
    """``F_a(y)`` from exponentially scaled integrals, for large ``y``."""
    if math.isinf(a):
        t = expint(1.0, y)
        g = math.expm1(t) / t if t > 0 else 1.0
        return expint_scaled(0.0, y) / (g * expint_scaled(1.0, y))
    if _is_one(a):
        t = expint(2.0, y)
        g = -math.log1p(-t) / t if t > 0 else 1.0
        return expint_scaled(1.0, y) / (g * expint_scaled(2.0, y))
    p = 1.0 / a
    t = p * expint(p + 1.0, y)
    # (1 - (1 - t)**(1-a)) / t -> 1 - a as t -> 0
    g = -math.expm1((1.0 - a) * math.log1p(-t)) / t if t > 0 else 1.0 - a
    return (p - 1.0) * expint_scaled(p, y) / (g * p * expint_scaled(p + 1.0, y))


def ratio_value(a: float, y: float) -> float:
    """``F_a(y)``; ``a`` may be ``math.inf``."""
    a = _check_exponent(a)
    y = float(y)
    if not y > 0:
        raise DomainError(f"y must be > 0, got {y}")
    if y > TAIL_CUTOFF:
        return _ratio_tail(a, y)
    if math.isinf(a):
        return expint(0.0, y) / math.expm1(expint(1.0, y))
    if _is_one(a):
        return -expint(1.0, y) / _log_delta(1.0, y)
    p = 1.0 / a
    num = (p - 1.0) * expint(p, y)
    den = -math.expm1((1.0 - a) * _log_delta(p, y))
    return num / den


def ratio_point(a: float, y: float) -> RatioPoint:
    return RatioPoint(a=a, p=1.0 / a, y=y, delta=delta_of_y(a, y), value=ratio_value(a, y))


def ratio_at_delta(a: float, delta: float) -> float:
    """LRU/static ratio at cache ratio ``delta`` in the ``N -> inf`` regime."""
    return ratio_value(a, y_of_delta(a, delta))


def approx_max_abscissa(a: float) -> float:
    """``E_1(a)``, an approximation of the maximizing ``y`` for ``a`` up to about 2."""
    a = _check_exponent(a)
    return 0.0 if math.isinf(a) else expint(1.0, a)


def stationarity_residual(a: float, y: float) -> float:
    """Residual of the stationarity condition of ``F_a`` at ``y``.

    ``E_p(y)**2 - E_{p-1}(y) (delta**(1/p) - delta) / (p - 1)``; at ``a = 1``
    the limit ``E_1(y)**2 + E_0(y) delta ln(delta)``.  Zero at the maximizer.
    """
    a = _check_exponent(a)
    if math.isinf(a):
        raise DomainError("no stationarity residual for an infinite exponent")
    y = float(y)
    delta = delta_of_y(a, y)
    if _is_one(a):
        return expint(1.0, y) ** 2 + expint(0.0, y) * delta * math.log(delta)
    p = 1.0 / a
    return expint(p, y) ** 2 - expint(p - 1.0, y) * (delta ** (1.0 / p) - delta) / (p - 1.0)


def _golden_max(f, lo: float, hi: float, tol: float):
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def find_max(a: float, lo: float = SEARCH_LO, hi: float = SEARCH_HI,
             tol: float = SEARCH_TOL, grid: int = 400) -> RatioMaximum:
    """Maximize ``F_a`` over ``y`` in ``[lo, hi]`` by golden-section search.

    A log-spaced grid of ``grid`` points is checked afterwards; if any grid
    value beats the search result the search is repeated around it.
    """
    a = _check_exponent(a)
    f = lambda y: ratio_value(a, y)
    y_star, f_max = _golden_max(f, lo, hi, tol)

    ys = np.geomspace(lo, hi, grid)
    values = np.array([f(y) for y in ys])
    best = int(np.argmax(values))
    if values[best] > f_max:
        left = ys[max(best - 1, 0)]
        right = ys[min(best + 1, grid - 1)]
        y_star, f_max = _golden_max(f, left, right, tol)
    # a monotone F_a peaks on the bracket edge itself
    for edge in (lo, hi):
        if f(edge) > f_max:
            y_star, f_max = edge, f(edge)

    return RatioMaximum(
        a=a,
        y_star=y_star,
        delta_star=delta_of_y(a, y_star) if math.isfinite(a) else math.nan,
        f_max=f_max,
        y_approx=approx_max_abscissa(a),
        jelenkovic=jelenkovic_constant(a) if a > 1 and math.isfinite(a) else None,
    )
