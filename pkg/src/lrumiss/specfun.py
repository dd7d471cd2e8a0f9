"""Real-order generalized exponential integral and companions.

``E_p(x) = x**(p-1) * Gamma(1-p, x) = int_1^inf exp(-x t) t**(-p) dt``

Evaluation uses the expansion at the origin for ``x < 1`` and a continued
fraction for ``x >= 1``.  Orders that sit at (or near) a positive integer
pair the pole of ``Gamma(1-p)`` with the singular term of the power series
so that no catastrophic cancellation happens when ``p = 1/a`` comes from a
user supplied exponent such as ``a = 1/3``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

EULER_GAMMA = 0.57721566490153286061
INTEGER_TOL = 1e-9
SERIES_CUTOFF = 1.0

_PAIR_WINDOW = 0.1      # |p - n| below which the pole/singular-term pairing is used
_EPS = 2.2e-16
_MAX_TERMS = 400
_CF_MAXIT = 20000


class DomainError(ValueError):
    """Argument outside the domain where the function is defined or finite."""


@dataclass(frozen=True)
class ExpIntOrder:
    """Order ``p`` of ``E_p`` together with its integer classification."""

    p: float
    nearest: int
    offset: float

    @classmethod
    def of(cls, p: float | "ExpIntOrder") -> "ExpIntOrder":
        if isinstance(p, ExpIntOrder):
            return p
        p = float(p)
        if not math.isfinite(p):
            raise DomainError(f"order must be finite, got {p}")
        if p < -1.0:
            raise DomainError(f"order must be >= -1, got {p}")
        n = int(round(p))
        return cls(p, n, p - n)

    @property
    def is_integer(self) -> bool:
        return abs(self.offset) < INTEGER_TOL


@dataclass(frozen=True)
class RootBracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty bracket [{self.lo}, {self.hi}]")
        if self.f_lo * self.f_hi > 0:
            raise ValueError("bracket ends do not straddle a root")


def _zeta_sum(a: float) -> float:
    n = 64
    k = np.arange(n - 1, 0, -1, dtype=float)
    head = math.fsum(k ** (-a))
    # Euler-Maclaurin tail starting at n, Bernoulli terms B2..B10
    tail = n ** (1.0 - a) / (a - 1.0) + 0.5 * n ** (-a)
    bern = (1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0)
    rising = a
    for j, b in enumerate(bern, start=1):
        tail += b / math.factorial(2 * j) * rising * n ** (-a - 2 * j + 1)
        rising *= (a + 2 * j - 1) * (a + 2 * j)
    return head + tail


def zeta(a: float) -> float:
    """Riemann zeta for real ``a > 1`` (partial sum plus Euler-Maclaurin tail)."""
    a = float(a)
    if not a > 1.0:
        raise DomainError(f"zeta needs a > 1, got {a}")
    return _zeta_sum(a)


# zeta(k), k = 2..41, for the log-gamma series around 1
_ZETA_INT = tuple(_zeta_sum(float(k)) for k in range(2, 42))


def _lgamma_one_minus(eps: float) -> float:
    """log Gamma(1 - eps) for |eps| < 0.5, accurate relative to eps."""
    total = EULER_GAMMA * eps
    power = eps
    for k, z in enumerate(_ZETA_INT, start=2):
        power *= eps
        term = z * power / k
        total += term
        if abs(term) < _EPS * abs(total) * 1e-2:
            break
    return total


def _gamma_term(p: float, x: float) -> float:
    """x**(p-1) * Gamma(1-p) for non-integer p, evaluated in log space."""
    s = 1.0 - p
    if s > 0:
        return x ** (p - 1.0) * math.gamma(s)
    # Gamma is negative on (-1, 0), (-3, -2), ...
    sign = -1.0 if math.floor(-s) % 2 == 0 else 1.0
    log_mag = (p - 1.0) * math.log(x) + math.lgamma(s)
    if log_mag < -745.0:
        return 0.0
    return sign * math.exp(log_mag)


def _paired_term(m: int, eps: float, x: float) -> float:
    """x**(p-1) Gamma(1-p) - (-x)**m / (m! (1-p+m)) with p = m + 1 + eps.

    Finite at eps = 0, where it reduces to the digamma form
    (-x)**m / m! * (psi(m+1) - ln x).
    """
    log_pref = m * math.log(x) - math.lgamma(m + 1.0)
    if log_pref < -745.0:
        return 0.0
    pref = math.exp(log_pref) * (-1.0 if m % 2 == 0 else 1.0)
    if abs(eps) < INTEGER_TOL:
        harm = math.fsum(1.0 / j for j in range(1, m + 1))
        return pref * (math.log(x) + EULER_GAMMA - harm)
    if m:
        shift = math.fsum(np.log1p(eps / np.arange(1, m + 1, dtype=float)))
    else:
        shift = 0.0
    g = eps * math.log(x) + _lgamma_one_minus(eps) - shift
    return pref * math.expm1(g) / eps


def _origin_series(order: ExpIntOrder, x: float, kmax: int | None = None,
                   drop_constant: bool = False) -> float:
    """Expansion of E_p at the origin.

    With ``drop_constant`` the value ``E_p(x) - 1/(p-1)`` is returned, which
    stays accurate as x -> 0 for p > 1.
    """
    p = order.p
    skip = -1
    if order.nearest >= 1 and abs(order.offset) < _PAIR_WINDOW:
        skip = order.nearest - 1
        head = _paired_term(skip, order.offset, x)
    else:
        head = _gamma_term(p, x)

    limit = _MAX_TERMS if kmax is None else kmax
    total = 0.0
    term_pow = 1.0          # (-x)**k / k!
    k = 0
    while k <= limit:
        if k:
            term_pow *= -x / k
        if k != skip and not (drop_constant and k == 0):
            t = term_pow / (1.0 - p + k)
            total += t
            if kmax is None and k > 2 and abs(t) <= 1e-18 * abs(head - total):
                break
        k += 1
    value = head - total
    if drop_constant and skip == 0:
        value -= 1.0 / (p - 1.0)
    return value


def _continued_fraction(p: float, x: float, scaled: bool = False) -> float:
    """E_p(x) for x >= 1 (modified Lentz on the Legendre fraction)."""
    tiny = 1e-300
    b = x + p
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _CF_MAXIT):
        an = -i * (p - 1.0 + i)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h if scaled else h * math.exp(-x)
    raise ArithmeticError(f"continued fraction did not converge for p={p}, x={x}")


def _expint(order: ExpIntOrder, x: float) -> float:
    p = order.p
    if order.is_integer and order.nearest == 0:
        return math.exp(-x) / x
    if order.is_integer and order.nearest == -1:
        return math.exp(-x) * (1.0 + 1.0 / x) / x
    if x < SERIES_CUTOFF:
        return _origin_series(order, x)
    if p < 0.0:
        # p E_{p+1} + x E_p = exp(-x): both terms positive for p < 0
        return (math.exp(-x) - p * _expint(ExpIntOrder.of(p + 1.0), x)) / x
    return _continued_fraction(p, x)


def expint(p: float | ExpIntOrder, x: float) -> float:
    """Generalized exponential integral ``E_p(x)`` for real ``p >= -1``.

    Parameters
    ----------
    p : float or ExpIntOrder
        Order; integers (within ``INTEGER_TOL``) use the digamma branch.
    x : float
        Argument, ``x > 0``; ``x == 0`` is accepted when ``p > 1``.

    Returns
    -------
    float
        ``E_p(x)``, strictly positive and decreasing in ``x``.
    """
    order = ExpIntOrder.of(p)
    x = float(x)
    if math.isnan(x) or x < 0:
        raise DomainError(f"expint needs x >= 0, got {x}")
    if x == 0.0:
        if order.p > 1.0:
            return 1.0 / (order.p - 1.0)
        raise DomainError(f"E_p(0) diverges for p = {order.p} <= 1")
    return _expint(order, x)


def expint_scaled(p: float | ExpIntOrder, x: float) -> float:
    """``exp(x) E_p(x)``, finite where ``E_p(x)`` itself underflows.

    Parameters
    ----------
    p : float or ExpIntOrder
        Order, ``p >= -1``.
    x : float
        Argument, ``x > 0``.
    """
    order = ExpIntOrder.of(p)
    x = float(x)
    if math.isnan(x) or x <= 0:
        raise DomainError(f"expint_scaled needs x > 0, got {x}")
    if order.is_integer and order.nearest == 0:
        return 1.0 / x
    if order.is_integer and order.nearest == -1:
        return (1.0 + 1.0 / x) / x
    if x < SERIES_CUTOFF:
        return math.exp(x) * _expint(order, x)
    if order.p < 0.0:
        return (1.0 - order.p * expint_scaled(order.p + 1.0, x)) / x
    return _continued_fraction(order.p, x, scaled=True)


def expint_deficit(p: float | ExpIntOrder, x: float) -> float:
    """``E_p(0) - E_p(x)`` for ``p > 1`` without cancellation near 0."""
    order = ExpIntOrder.of(p)
    if not order.p > 1.0:
        raise DomainError(f"deficit needs p > 1, got {order.p}")
    x = float(x)
    if math.isnan(x) or x < 0:
        raise DomainError(f"deficit needs x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    if x < SERIES_CUTOFF:
        return -_origin_series(order, x, drop_constant=True)
    return 1.0 / (order.p - 1.0) - _expint(order, x)


def expint_series_origin(p: float | ExpIntOrder, x: float, order: int) -> float:
    """Truncated expansion of ``E_p`` at 0 keeping powers ``x**k``, ``k <= order``.

    Non-integer orders keep the ``x**(p-1) Gamma(1-p)`` term; integer orders
    ``n`` replace the ``k = n-1`` power by ``(-x)**(n-1)/(n-1)! (psi(n) - ln x)``.
    """
    o = ExpIntOrder.of(p)
    x = float(x)
    if not 0.0 < x < 0.5:
        raise DomainError(f"origin series is meant for 0 < x < 0.5, got {x}")
    if order < 1:
        raise DomainError("series order must be >= 1")
    return _origin_series(o, x, kmax=order)


def upper_gamma(s: float, x: float) -> float:
    """Upper incomplete gamma ``Gamma(s, x)`` for real ``s`` and ``x > 0``.

    Uses ``Gamma(s, x) = x**s E_{1-s}(x)`` for ``s <= 2`` and the upward
    recurrence ``Gamma(s+1, x) = s Gamma(s, x) + x**s exp(-x)`` above.
    """
    s = float(s)
    x = float(x)
    if not x > 0:
        raise DomainError(f"upper_gamma needs x > 0, got {x}")
    if not math.isfinite(s):
        raise DomainError(f"upper_gamma needs finite s, got {s}")
    if s <= 2.0:
        return x ** s * expint(1.0 - s, x)
    steps = math.ceil(s - 2.0)
    t = s - steps
    value = x ** t * expint(1.0 - t, x)
    for _ in range(steps):
        value = t * value + x ** t * math.exp(-x)
        t += 1.0
    return value


def harmonic(n: int, a: float) -> float:
    """Generalized harmonic number ``sum_{i=1..n} i**(-a)``, summed exactly."""
    n = int(n)
    if n < 1:
        raise DomainError(f"harmonic needs n >= 1, got {n}")
    a = float(a)
    if not math.isfinite(a):
        raise DomainError(f"harmonic needs finite a, got {a}")
    if a == 0.0:
        return float(n)
    i = np.arange(n, 0, -1, dtype=float)
    return math.fsum(i ** (-a))


def harmonic_approx(n: int, a: float) -> float:
    """Integral approximation ``(n**(1-a) - a)/(1-a)``; ``ln n + gamma`` at a = 1."""
    if n < 2:
        raise DomainError(f"harmonic_approx needs n >= 2, got {n}")
    a = float(a)
    if abs(a - 1.0) < INTEGER_TOL:
        return math.log(n) + EULER_GAMMA
    return (n ** (1.0 - a) - a) / (1.0 - a)


def _solve_increasing(f: Callable[[float], float], bracket: RootBracket,
                      xtol_rel: float = 4e-16, maxiter: int = 300) -> float:
    """Root of an increasing ``f`` inside ``bracket`` (Illinois false position
    with a bisection safeguard)."""
    lo, hi, flo, fhi = bracket.lo, bracket.hi, bracket.f_lo, bracket.f_hi
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    side = 0
    for _ in range(maxiter):
        width = hi - lo
        if width <= xtol_rel * max(abs(lo), abs(hi)) or width <= 1e-300:
            break
        x = hi - fhi * width / (fhi - flo)
        # keep the secant step inside the central part of the bracket
        if not lo + 0.01 * width < x < hi - 0.01 * width:
            x = lo + 0.5 * width
        fx = f(x)
        if fx == 0.0:
            return x
        if fx < 0.0:
            lo, flo = x, fx
            if side == -1:
                fhi *= 0.5
            side = -1
        else:
            hi, fhi = x, fx
            if side == 1:
                flo *= 0.5
            side = 1
    return lo if abs(flo) < abs(fhi) else hi


def _seed(v: float) -> float:
    """Two-term Lambert-W asymptote ln(1/v) - ln ln(1/v); bracket seed only."""
    if v < math.exp(-1.0):
        big = math.log(1.0 / v)
        guess = big - math.log(big)
        if guess > 0:
            return guess
    return 1.0


def _grow_bracket(g: Callable[[float], float], x0: float, floor: float | None) -> RootBracket:
    """Bracket the root of an increasing ``g`` starting from ``x0``."""
    hi = x0
    ghi = g(hi)
    while ghi < 0.0:
        hi *= 2.0
        if hi > 1e6:
            raise DomainError("no bracket found: value below the attainable range")
        ghi = g(hi)
    lo = hi
    glo = ghi
    while glo > 0.0:
        nxt = lo / 2.0
        if floor is not None and nxt < 1e-300:
            lo, glo = floor, g(floor)
            break
        if nxt < 1e-300:
            raise DomainError("no bracket found: value above the attainable range")
        lo, glo = nxt, g(nxt)
    if lo == hi:
        hi = lo * 2.0 if lo > 0 else 1.0
        ghi = g(hi)
    return RootBracket(lo, hi, glo, ghi)


def expint_inv(p: float | ExpIntOrder, v: float) -> float:
    """Inverse of ``x -> E_p(x)`` on ``[0, inf)``.

    ``v`` must lie in ``(0, inf)`` for ``p <= 1`` and in ``(0, 1/(p-1)]`` for
    ``p > 1``.
    """
    order = ExpIntOrder.of(p)
    v = float(v)
    if not (v > 0 and math.isfinite(v)):
        raise DomainError(f"expint_inv needs v > 0, got {v}")
    floor = None
    if order.p > 1.0:
        top = 1.0 / (order.p - 1.0)
        if v > top * (1.0 + 4 * _EPS):
            raise DomainError(f"v = {v} exceeds E_p(0) = {top} for p = {order.p}")
        if v >= top:
            return 0.0
        floor = 0.0
    g = lambda x: v - _expint(order, x) if x > 0 else v - 1.0 / (order.p - 1.0)
    bracket = _grow_bracket(g, _seed(v), floor)
    return _solve_increasing(g, bracket)


def expint_deficit_inv(p: float | ExpIntOrder, w: float) -> float:
    """Inverse of ``x -> E_p(0) - E_p(x)`` for ``p > 1``, ``0 <= w < 1/(p-1)``."""
    order = ExpIntOrder.of(p)
    if not order.p > 1.0:
        raise DomainError(f"deficit inverse needs p > 1, got {order.p}")
    w = float(w)
    top = 1.0 / (order.p - 1.0)
    if not 0.0 <= w < top:
        raise DomainError(f"deficit {w} outside [0, {top})")
    if w == 0.0:
        return 0.0
    g = lambda x: expint_deficit(order, x) - w
    x0 = _seed(top - w) if top - w < math.exp(-1.0) else max(w, 1e-12)
    bracket = _grow_bracket(g, x0, 0.0)
    return _solve_increasing(g, bracket)
