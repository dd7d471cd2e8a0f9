import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import optimize

from lrumiss.model import (
    CacheSize,
    PowerLaw,
    che_characteristic_time,
    lru_mr,
    lru_mr_raw,
    predict,
    preref_analytic,
    preref_ccdf_discrete,
    static_mr,
    ws_analytic,
    ws_discrete,
    ws_inverse,
)
from lrumiss.specfun import DomainError


class TestPowerLaw:
    @pytest.mark.parametrize("a", [0.0, 0.3, 1.0, 2.5])
    def test_normalized_and_sorted(self, a):
        p = PowerLaw(a, 1000).probabilities()
        assert math.fsum(p) == pytest.approx(1.0, abs=1e-9)
        assert np.all(np.diff(p) <= 0)

    def test_cdf_ends_at_one(self):
        assert PowerLaw(1.2, 77).cdf()[-1] == 1.0

    def test_flags(self):
        assert PowerLaw(0, 4).is_uniform
        assert PowerLaw(1.0, 4).is_zipf

    @pytest.mark.parametrize("a,N", [(-0.1, 10), (1.0, 0), (math.inf, 5), (1.0, 2.5)])
    def test_rejects_bad_parameters(self, a, N):
        with pytest.raises(DomainError):
            PowerLaw(a, N)

    def test_cache_size_helpers(self):
        law = PowerLaw(1, 1000)
        assert CacheSize.of(law, 250).delta == 0.25
        assert CacheSize.from_ratio(law, 0.1).D == pytest.approx(100)
        assert lru_mr(law, CacheSize.of(law, 250)) == lru_mr(law, 250)


class TestDiscrete:
    def test_uniform_two(self):
        law = PowerLaw(0, 2)
        assert preref_ccdf_discrete(law, 0) == 1.0
        assert preref_ccdf_discrete(law, 1) == pytest.approx(0.5)

    def test_ws_endpoints(self):
        law = PowerLaw(1.3, 50)
        assert ws_discrete(law, 0) == 0.0
        assert ws_discrete(law, 1) == pytest.approx(1.0, abs=1e-12)

    def test_ws_saturates(self):
        assert ws_discrete(PowerLaw(1, 8), 10 ** 6) == pytest.approx(8, abs=1e-6)

    def test_preref_monte_carlo(self):
        # independent estimate: sample re-reference gaps directly
        law = PowerLaw(1, 8)
        rng = np.random.default_rng(5)
        ids = np.searchsorted(law.cdf(), rng.random(10 ** 7), side="right")
        order = np.argsort(ids, kind="stable")
        same = ids[order[1:]] == ids[order[:-1]]
        gaps = (order[1:] - order[:-1])[same] - 1
        est = np.mean(gaps >= 4)
        sigma = math.sqrt(est * (1 - est) / gaps.size)
        assert abs(est - preref_ccdf_discrete(law, 4)) < 3 * sigma + 1e-4

    def test_ws_is_sum_of_preref(self):
        law = PowerLaw(0.8, 200)
        total = sum(preref_ccdf_discrete(law, x) for x in range(40))
        assert ws_discrete(law, 40) == pytest.approx(total, rel=1e-12)


class TestAnalytic:
    def test_uniform_examples(self):
        law = PowerLaw(0, 1024)
        assert preref_analytic(law, 1024) == pytest.approx(0.367879, abs=1e-6)
        assert preref_analytic(law, 10240) == pytest.approx(4.53997e-05, rel=1e-5)
        assert ws_inverse(law, 512) == pytest.approx(-1024 * math.log(0.5), rel=1e-14)

    def test_uniform_ws_one(self):
        assert ws_analytic(PowerLaw(0, 10 ** 6), 1) == pytest.approx(1.0, abs=1e-6)

    def test_zipf_preref_vs_discrete(self, zipf_32k):
        assert preref_analytic(zipf_32k, 100) == pytest.approx(
            preref_ccdf_discrete(zipf_32k, 100), rel=0.02)

    def test_ws_vs_discrete_a2(self):
        law = PowerLaw(2, 2 ** 15)
        assert ws_analytic(law, 1000) == pytest.approx(ws_discrete(law, 1000), rel=0.02)

    @pytest.mark.parametrize("a", [0.0, 0.5, 1.0, 2.0])
    def test_ws_zero(self, a):
        assert ws_analytic(PowerLaw(a, 100), 0) == 0.0

    def test_zipf_ws_at_one(self, zipf_32k):
        # only the N -> inf limit equals 1; the gap closes like 1/ln N
        gaps = [abs(ws_analytic(PowerLaw(1, n), 1) - 1) for n in (2 ** 15, 2 ** 22)]
        assert gaps[0] < 0.25
        assert gaps[1] < gaps[0]

    def test_zipf_ws_inverse_of_one(self):
        gaps = [abs(ws_inverse(PowerLaw(1, n), 1) - 1) for n in (2 ** 15, 2 ** 22)]
        assert gaps[0] < 0.25
        assert gaps[1] < gaps[0]

    def test_ws_inverse_a_half_vs_discrete_root(self):
        law = PowerLaw(0.5, 4096)
        root = optimize.brentq(lambda d: ws_discrete_real(law, d) - 1000, 1, 10 ** 6, xtol=1e-9)
        assert ws_inverse(law, 1000) == pytest.approx(root, rel=0.02)

    @pytest.mark.parametrize("a", [0.0, 0.4, 1.0, 1.7, 3.0])
    def test_derivative_consistency(self, a):
        law = PowerLaw(a, 4096)
        for D in np.geomspace(1, 1e5, 12):
            h = 1e-5 * D
            fd = (ws_analytic(law, D + h) - ws_analytic(law, D - h)) / (2 * h)
            assert fd == pytest.approx(preref_analytic(law, D), rel=1e-4)

    EXPS = [0.0, 0.3, 0.8, 1.0, 1.5, 2.5]

    def test_monotone_in_exponent(self):
        # ordering of the continuous closed form over a grid of D
        N = 4096
        for D in np.geomspace(1, 1e5, 25):
            ws = [ws_analytic(PowerLaw(a, N), D) for a in self.EXPS]
            assert all(x > y for x, y in zip(ws, ws[1:])), D

    def test_monotone_in_exponent_beyond_small_windows(self):
        # rank mass in [0, 1) breaks the ordering of the closed form below D ~ 65
        N = 4096
        for D in np.geomspace(100, 1e5, 25):
            ws = [ws_analytic(PowerLaw(a, N), D) for a in self.EXPS]
            assert all(x > y for x, y in zip(ws, ws[1:])), D

    def test_monotone_in_exponent_discrete(self):
        N = 4096
        for D in np.unique(np.geomspace(2, 1e5, 40).astype(int)):
            ws = [ws_discrete(PowerLaw(a, N), D) for a in self.EXPS]
            assert all(x > y for x, y in zip(ws, ws[1:])), D

    @pytest.mark.parametrize("a", [0.0, 0.3, 0.6])
    def test_discrete_continuous_agreement(self, a):
        # meant for laws with max p_i < 0.05; a = 1 would need N ~ 1e8
        law = PowerLaw(a, 2 ** 15)
        assert law.probabilities()[0] < 0.05
        for D in np.geomspace(10, 1e6, 12).astype(int):
            assert ws_analytic(law, D) == pytest.approx(ws_discrete(law, D), rel=0.02)

    @pytest.mark.parametrize("a", [0.0, 0.5, 1.0, 1.5])
    def test_round_trip(self, a):
        law = PowerLaw(a, 10 ** 4)
        for delta in np.linspace(0.01, 0.99, 25):
            D = delta * law.N
            assert abs(ws_analytic(law, ws_inverse(law, D)) - D) <= 1e-6 * law.N

    def test_che_is_ws_inverse(self, zipf_32k):
        for C in (1.0, 10.0, 5000.0):
            assert che_characteristic_time(zipf_32k, C) == ws_inverse(zipf_32k, C)
        law = PowerLaw(0, 1024)
        assert che_characteristic_time(law, 512) == pytest.approx(-1024 * math.log(0.5))

    def test_che_zipf_at_one(self, zipf_32k):
        assert che_characteristic_time(zipf_32k, 1) == pytest.approx(1.0, abs=0.25)


def ws_discrete_real(law, D):
    p = law.probabilities()
    return float(-np.sum(np.expm1(D * np.log1p(-p))))


class TestMissRates:
    def test_uniform_exact(self):
        law = PowerLaw(0, 1024)
        for D in range(1, 1024, 7):
            assert lru_mr(law, D) == 1 - D / 1024
        assert lru_mr(law, 256) == 0.75

    def test_large_cache_limit(self, zipf_32k):
        assert lru_mr(zipf_32k, zipf_32k.N - 1e-3) < 1e-6

    def test_domain(self, zipf_32k):
        for D in (0, -1, zipf_32k.N):
            with pytest.raises(DomainError):
                lru_mr(zipf_32k, D)
        with pytest.raises(DomainError):
            static_mr(zipf_32k, zipf_32k.N + 1)

    def test_clamp_absorbs_small_cache_overshoot(self, zipf_32k):
        # ranks below 1 carry mass in the continuous model
        assert lru_mr_raw(zipf_32k, 1) > 1
        assert lru_mr(zipf_32k, 1) == 1.0

    def test_static_examples(self):
        assert static_mr(PowerLaw(1, 1024), 1024) == 0.0
        assert static_mr(PowerLaw(0, 1024), 256) == pytest.approx(0.75)
        # a = 1/2 with N -> inf: 1 - sqrt(delta)
        law = PowerLaw(0.5, 10 ** 7)
        assert static_mr(law, 0.25 * law.N) == pytest.approx(0.5, abs=1e-3)

    def test_static_decreasing(self):
        law = PowerLaw(0.7, 1000)
        values = [static_mr(law, D) for D in range(1, 1001, 10)]
        assert all(x > y for x, y in zip(values, values[1:]))

    def test_no_discontinuity_at_one(self):
        N = 10 ** 5
        for delta in np.linspace(0.05, 0.95, 10):
            base = lru_mr(PowerLaw(1, N), delta * N)
            for a in (1 - 1e-4, 1 + 1e-4):
                assert abs(lru_mr(PowerLaw(a, N), delta * N) - base) < 1e-3

    @settings(max_examples=60, deadline=None)
    @given(a=st.floats(0.05, 3.0), delta=st.floats(0.01, 0.99))
    def test_lru_dominates_static(self, a, delta):
        law = PowerLaw(a, 4096)
        D = delta * law.N
        assert lru_mr(law, D) >= static_mr(law, D)

    def test_predict_row(self, zipf_32k):
        row = predict(zipf_32k, 1024)
        assert 0 <= row.mr_lru <= 1 and 0 <= row.mr_static <= 1
        assert row.ratio == pytest.approx(row.mr_lru / row.mr_static)
        assert row.ws == pytest.approx(ws_analytic(zipf_32k, 1024))
