import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from maxtail.errors import ParameterError
from maxtail.frechet import (
    EULER_GAMMA,
    LN2,
    FrechetParams,
    ParetoParams,
    frechet_cdf,
    frechet_quantile,
    frechet_sample,
    log2_frechet_moments,
    log2_standard_frechet,
    pareto_sample,
)
from maxtail.rng import make_rng


def test_params_validation():
    for bad in (0.0, -1.0, math.nan, math.inf):
        with pytest.raises(ParameterError):
            FrechetParams(bad)
        with pytest.raises(ParameterError):
            FrechetParams(1.0, bad)
        with pytest.raises(ParameterError):
            ParetoParams(bad)
        with pytest.raises(ParameterError):
            ParetoParams(1.0, bad)


def test_cdf_at_scale_is_exp_minus_one():
    for a, s in [(0.5, 0.2), (1.5, 1.0), (4.0, 7.0)]:
        assert frechet_cdf(s, FrechetParams(a, s)) == pytest.approx(math.exp(-1), rel=1e-15)


def test_cdf_nonpositive_is_zero():
    assert frechet_cdf(0.0, FrechetParams(1.0)) == 0.0
    assert np.all(frechet_cdf(np.array([-3.0, -1e-300, 0.0]), FrechetParams(2.0)) == 0.0)


def test_cdf_direct_value():
    assert frechet_cdf(2.0, FrechetParams(1.0)) == pytest.approx(0.606531, abs=1e-6)
    assert frechet_cdf(2.0, FrechetParams(1.0)) == pytest.approx(math.exp(-0.5), rel=1e-15)


def test_quantile_examples():
    e1 = math.exp(-1)
    assert frechet_quantile(e1, FrechetParams(1.0)) == pytest.approx(1.0, rel=1e-15)
    assert frechet_quantile(e1, FrechetParams(2.0, 3.0)) == pytest.approx(3.0, rel=1e-15)
    assert frechet_quantile(0.5, FrechetParams(1.0)) == pytest.approx(1.442695, abs=1e-6)
    assert frechet_cdf(frechet_quantile(0.5, FrechetParams(1.0)), FrechetParams(1.0)) == pytest.approx(0.5, rel=1e-14)


@pytest.mark.parametrize("u", [0.0, 1.0, -0.1, 1.5, math.nan])
def test_quantile_domain(u):
    with pytest.raises(ParameterError):
        frechet_quantile(u, FrechetParams(1.0))


@given(
    u=st.floats(1e-6, 1 - 1e-6),
    alpha=st.floats(0.5, 5.0),
    sigma=st.floats(0.1, 10.0),
)
def test_cdf_quantile_round_trip(u, alpha, sigma):
    p = FrechetParams(alpha, sigma)
    assert frechet_cdf(frechet_quantile(u, p), p) == pytest.approx(u, rel=1e-12)


def test_sampler_ks_against_cdf():
    p = FrechetParams(1.5, 2.0)
    x = frechet_sample(p, make_rng(11), 100_000)
    ks = stats.kstest(x, lambda t: frechet_cdf(t, p)).statistic
    assert ks < 0.01
    assert x.min() > 0


def test_sampler_scalar_and_clamp():
    p = FrechetParams(1.0)
    v = frechet_sample(p, make_rng(3))
    assert isinstance(v, float) and v > 0

    class Edge:
        def random(self, size=None):
            return np.array([0.0, 1.0])

    out = frechet_sample(p, Edge(), 2)
    assert np.all(np.isfinite(out)) and np.all(out > 0)


def test_log2_mean_of_standard_frechet():
    x = frechet_sample(FrechetParams(1.0), make_rng(5), 1_000_000)
    lg = np.log2(x)
    se = lg.std() / math.sqrt(lg.size)
    assert abs(lg.mean() - EULER_GAMMA / LN2) < 3 * se
    assert EULER_GAMMA / LN2 == pytest.approx(0.832746, abs=1e-6)


def test_log2_standard_frechet_matches_sampler():
    a = log2_standard_frechet(make_rng(8), 1000, alpha=2.0)
    b = np.log2(frechet_sample(FrechetParams(2.0), make_rng(8), 1000))
    assert np.allclose(a, b, rtol=0, atol=1e-12)


def test_pareto_support_and_tail_probability():
    p = ParetoParams(1.5, 2.0)
    x = pareto_sample(p, make_rng(21), 1_000_000)
    assert np.all(x >= 2.0)
    q = 2.0 ** -1.5
    phat = np.mean(x > 4.0)
    assert abs(phat - q) < 3 * math.sqrt(q * (1 - q) / x.size)


def test_pareto_log_log_slope():
    x = np.sort(pareto_sample(ParetoParams(1.5), make_rng(22), 1_000_000))[::-1]
    k = np.arange(1, x.size + 1)
    surv = k / x.size
    sel = slice(100, 100_000)
    slope = np.polyfit(np.log(x[sel]), np.log(surv[sel]), 1)[0]
    assert slope == pytest.approx(-1.5, abs=0.05)


def test_log2_moments_values():
    m, v = log2_frechet_moments(1.0)
    assert m == pytest.approx(0.832746, abs=1e-6)
    assert v == pytest.approx(3.4237147, abs=1e-6)
    assert log2_frechet_moments(2.0)[1] == pytest.approx(v / 4, rel=1e-15)
    assert log2_frechet_moments(1e12)[0] < 1e-11
    with pytest.raises(ParameterError):
        log2_frechet_moments(0.0)


def test_log2_moments_monte_carlo():
    g = log2_standard_frechet(make_rng(31), 10_000_000)
    m, v = log2_frechet_moments(1.0)
    n = g.size
    assert abs(g.mean() - m) < 3 * math.sqrt(v / n)
    # var of the sample variance of a Gumbel: (mu4 - sigma^4) / n, mu4 = 5.4 sigma^4
    assert abs(g.var() - v) < 3 * math.sqrt(4.4 * v * v / n)


def test_max_stability():
    m = 16
    z = frechet_sample(FrechetParams(1.5), make_rng(41), (100_000, m))
    scaled = m ** (-1 / 1.5) * z.max(axis=1)
    ks = stats.kstest(scaled, lambda t: frechet_cdf(t, FrechetParams(1.5))).statistic
    assert ks < 0.01
