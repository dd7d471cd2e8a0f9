import math

import numpy as np
import pytest
from scipy import integrate

from lrumiss.model import PowerLaw

# Acceptance results collected by tests/test_acceptance.py, printed at the end.
ACCEPTANCE_LINES: dict = {}


def quad_expint(p: float, x: float) -> float:
    """Independent E_p(x) by adaptive quadrature.

    Substituting t = 1 + u/x turns the integral over [1, inf) into
    exp(-x)/x * int_0^inf exp(-u) (1 + u/x)**(-p) du, which is smooth.
    """
    f = lambda u: math.exp(-u) * (1.0 + u / x) ** (-p)
    cuts = sorted({0.0, min(x, 1.0), 1.0, 10.0, 50.0})
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        total += integrate.quad(f, lo, hi, epsabs=0, epsrel=1e-13, limit=200)[0]
    total += integrate.quad(f, 50.0, np.inf, epsabs=0, epsrel=1e-13)[0]
    return math.exp(-x) / x * total


def quad_upper_gamma(s: float, x: float) -> float:
    """Gamma(s, x) = x**s E_{1-s}(x) with E from quadrature."""
    return x ** s * quad_expint(1.0 - s, x)


@pytest.fixture(scope="session")
def zipf_32k():
    return PowerLaw(1.0, 2 ** 15)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
