import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from mwcr.model import (
    ModelParams,
    RiskParams,
    cdf,
    log_pdf,
    log_survival,
    pdf,
    quantile,
    sample_latent_pair,
    survival,
)

# 1 - exp(1 - e) evaluated with mpmath at 50 digits.
CDF_AT_ONE = 0.82062592126598281803801041986699495187368893319177
SURVIVAL_AT_ONE = 0.17937407873401718196198958013300504812631106680823

UNIT = RiskParams(lam=1.0, alpha=1.0, beta=1.0)


class TestConstruction:
    def test_rejects_nonpositive(self):
        for bad in (0.0, -1.0, math.nan, math.inf):
            with pytest.raises(ValueError):
                RiskParams(lam=bad, alpha=1.0, beta=1.0)
            with pytest.raises(ValueError):
                ModelParams(lambda1=1.0, lambda2=bad, alpha=1.0, beta=1.0)

    def test_degenerate_rate_excluded(self):
        with pytest.raises(ValueError):
            ModelParams(lambda1=1.0, lambda2=0.0, alpha=1.0, beta=1.0)

    def test_risk_projection_shares_scale_and_shape(self):
        mp = ModelParams(1.0, 0.6, 0.3, 0.1)
        assert mp.risk(1) == RiskParams(1.0, 0.3, 0.1)
        assert mp.risk(2) == RiskParams(0.6, 0.3, 0.1)
        with pytest.raises(ValueError):
            mp.risk(3)

    def test_with_value(self):
        mp = ModelParams(1.0, 0.6, 0.3, 0.1)
        assert mp.with_value("alpha", 2.0).alpha == 2.0
        with pytest.raises(ValueError):
            mp.with_value("gamma", 1.0)


class TestCdf:
    def test_at_zero(self):
        assert cdf(0.0, UNIT) == 0.0

    def test_limit_one(self):
        assert abs(cdf(1e6, UNIT) - 1.0) < 1e-12

    def test_tabulated_value(self):
        assert cdf(1.0, UNIT) == pytest.approx(CDF_AT_ONE, abs=1e-14)

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            cdf(-0.5, UNIT)

    def test_monotone(self):
        t = np.linspace(0.0, 5.0, 200)
        values = cdf(t, RiskParams(1.0, 0.3, 0.1))
        assert np.all(np.diff(values) >= 0.0)

    def test_overflow_clamp(self):
        # (t/alpha)**beta far beyond 700 collapses survival to zero.
        p = RiskParams(1.0, 1.0, 8.0)
        assert cdf(20.0, p) == 1.0
        assert survival(20.0, p) == 0.0
        assert log_survival(20.0, p) == -math.inf


class TestPdf:
    def test_beta_one_small_t(self):
        p = RiskParams(lam=2.5, alpha=1.0, beta=1.0)
        assert pdf(1e-12, p) == pytest.approx(2.5, abs=1e-9)

    def test_nonpositive_time_rejected(self):
        with pytest.raises(ValueError):
            pdf(0.0, UNIT)
        with pytest.raises(ValueError):
            pdf(-1.0, UNIT)

    def test_integrates_to_one(self):
        # beta < 1 puts an integrable t**(beta-1) singularity at zero; the
        # quadrature is split there so the tail piece converges cleanly.
        p = RiskParams(1.0, 0.3, 0.1)
        head, _ = integrate.quad(lambda t: pdf(t, p), 0.0, 0.01, limit=400)
        tail, _ = integrate.quad(lambda t: pdf(t, p), 0.01, np.inf, limit=400)
        assert head + tail == pytest.approx(1.0, abs=1e-6)

    def test_matches_cdf_derivative(self):
        p = RiskParams(1.0, 0.3, 0.1)
        h = 1e-6
        for t in np.arange(0.1, 5.01, 0.35):
            numeric = (cdf(t + h, p) - cdf(t - h, p)) / (2.0 * h)
            assert pdf(t, p) == pytest.approx(numeric, rel=1e-5)


class TestSurvival:
    def test_at_zero(self):
        assert survival(0.0, UNIT) == 1.0

    def test_tabulated_value(self):
        assert survival(1.0, UNIT) == pytest.approx(SURVIVAL_AT_ONE, abs=1e-14)

    def test_complement(self):
        p = RiskParams(0.7, 0.3, 0.1)
        for t in np.linspace(0.0, 8.0, 50):
            assert survival(t, p) + cdf(t, p) == pytest.approx(1.0, abs=1e-15)

    def test_rate_additivity(self):
        # Minima closure: S_{l1} * S_{l2} = S_{l1+l2} for shared alpha, beta.
        a = RiskParams(1.0, 0.3, 0.1)
        b = RiskParams(0.6, 0.3, 0.1)
        both = RiskParams(1.6, 0.3, 0.1)
        for t in np.linspace(0.0, 10.0, 60):
            assert survival(t, a) * survival(t, b) == pytest.approx(
                survival(t, both), abs=1e-12
            )


class TestQuantile:
    def test_round_trip(self):
        triples = [
            RiskParams(1.0, 1.0, 1.0),
            RiskParams(1.0, 0.3, 0.1),
            RiskParams(2.5, 0.7, 3.0),
        ]
        for p in triples:
            for u in np.arange(0.01, 0.995, 0.07):
                assert abs(cdf(quantile(u, p), p) - u) < 1e-10

    def test_small_u_limit(self):
        assert quantile(1e-12, UNIT) < 1e-11

    def test_domain(self):
        for bad in (0.0, 1.0, -0.2, 1.5):
            with pytest.raises(ValueError):
                quantile(bad, UNIT)

    def test_monte_carlo_median(self):
        p = RiskParams(1.0, 0.3, 0.1)
        rng = np.random.default_rng(20240816)
        draws = quantile(rng.random(100_000), p)
        med = quantile(0.5, p)
        # standard error of the sample median: 1/(2 f(med) sqrt(n))
        se = 1.0 / (2.0 * pdf(med, p) * math.sqrt(draws.size))
        assert abs(np.median(draws) - med) < 2.0 * se


class TestLatentPair:
    def test_equal_rates_balanced(self):
        mp = ModelParams(1.0, 1.0, 0.3, 0.1)
        rng = np.random.default_rng(11)
        n = 10_000
        causes = np.array([sample_latent_pair(mp, rng)[1] for _ in range(n)])
        share = np.mean(causes == 1)
        sigma = math.sqrt(0.25 / n)
        assert abs(share - 0.5) < 3.0 * sigma

    def test_cause_probability_proportional(self):
        mp = ModelParams(1.0, 0.6, 0.3, 0.1)
        rng = np.random.default_rng(12)
        n = 10_000
        causes = np.array([sample_latent_pair(mp, rng)[1] for _ in range(n)])
        expected = 1.0 / 1.6
        sigma = math.sqrt(expected * (1.0 - expected) / n)
        assert abs(np.mean(causes == 1) - expected) < 3.0 * sigma

    def test_minimum_distribution(self):
        mp = ModelParams(1.0, 0.6, 0.3, 0.1)
        rng = np.random.default_rng(13)
        times = np.array([sample_latent_pair(mp, rng)[0] for _ in range(10_000)])
        pooled = mp.pooled()
        result = stats.kstest(times, lambda t: cdf(t, pooled))
        assert result.statistic < 0.02

    def test_batched_draws_match_loop(self):
        # rng.random((n, 2)) consumes the stream exactly like n scalar pairs.
        mp = ModelParams(1.0, 0.6, 0.3, 0.1)
        looped = [sample_latent_pair(mp, np.random.default_rng(99)) for _ in range(1)]
        rng = np.random.default_rng(99)
        u = rng.random((1, 2))
        t1 = quantile(u[0, 0], mp.risk(1))
        t2 = quantile(u[0, 1], mp.risk(2))
        expected = (t1, 1) if t1 <= t2 else (t2, 2)
        assert looped[0] == expected


@settings(max_examples=60, deadline=None)
@given(
    lam=st.floats(0.05, 20.0),
    alpha=st.floats(0.05, 20.0),
    beta=st.floats(0.05, 4.0),
    u=st.floats(1e-6, 1.0 - 1e-6),
)
def test_quantile_round_trip_property(lam, alpha, beta, u):
    p = RiskParams(lam, alpha, beta)
    t = quantile(u, p)
    assert t > 0.0
    assert abs(cdf(t, p) - u) < 1e-10


@settings(max_examples=60, deadline=None)
@given(
    lam=st.floats(0.05, 20.0),
    alpha=st.floats(0.05, 20.0),
    beta=st.floats(0.05, 4.0),
)
def test_cdf_monotone_property(lam, alpha, beta):
    p = RiskParams(lam, alpha, beta)
    grid = np.linspace(0.0, 6.0 * alpha, 64)
    values = cdf(grid, p)
    assert np.all(np.diff(values) >= 0.0)
    assert np.all((values >= 0.0) & (values <= 1.0))
