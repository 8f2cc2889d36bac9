import math

import numpy as np
import pytest
from scipy import stats

from maxtail.errors import ConfigError
from maxtail.frechet import FrechetParams, frechet_cdf, frechet_sample
from maxtail.generators import (
    VARIANTS,
    ModelConfig,
    burn_in_length,
    extremal_index_moving_maxima,
    gen_series,
)
from maxtail.rng import make_rng


def pareto_cdf(x, alpha):
    return np.where(x > 1, 1 - np.asarray(x, dtype=float) ** -alpha, 0.0)


def test_config_validation():
    bad = [
        dict(variant="garch", alpha=1.5, n=10),
        dict(variant="iid_pareto", alpha=0.0, n=10),
        dict(variant="iid_pareto", alpha=1.5, n=1),
        dict(variant="iid_pareto", alpha=1.5, n=10.5),
        dict(variant="ar1_pareto", alpha=1.5, n=10, phi=1.0),
        dict(variant="ar1_pareto", alpha=1.5, n=10, phi=-0.2),
        dict(variant="moving_maxima", alpha=1.5, n=10, coefficients=()),
        dict(variant="moving_maxima", alpha=1.5, n=10, coefficients=(1.0, 0.0)),
        dict(variant="moving_maxima", alpha=1.5, n=10, innovations="normal"),
    ]
    for kw in bad:
        with pytest.raises(ConfigError):
            ModelConfig(**kw)
    with pytest.raises(ConfigError):
        ModelConfig.from_dict({"variant": "iid_pareto", "alpha": 1, "n": 4, "colour": "red"})
    with pytest.raises(ConfigError):
        gen_series(ModelConfig("iid_pareto", 1.5, 10))


def test_config_round_trip():
    cfg = ModelConfig("moving_maxima", 1.0, 100, coefficients=(1, 0.9), seed=3)
    assert ModelConfig.from_dict(cfg.as_dict()) == cfg
    assert cfg.with_seed(9).seed == 9


@pytest.mark.parametrize("variant", VARIANTS)
def test_length_positivity_and_determinism(variant):
    cfg = ModelConfig(variant, 1.2, 1000, phi=0.5 if "ar1" in variant else 0.0, coefficients=(1.0, 0.5, 0.2), seed=12)
    x = gen_series(cfg)
    assert x.shape == (1000,) and np.all(x > 0) and np.all(np.isfinite(x))
    assert np.array_equal(x, gen_series(cfg))
    assert not np.array_equal(x, gen_series(cfg.with_seed(13)))


def test_burn_in():
    assert burn_in_length(0.0) == 10
    assert burn_in_length(0.9) == 100
    assert burn_in_length(0.5) == 20


def test_phi_zero_reduces_to_iid():
    n = 100_000
    a = gen_series(ModelConfig("ar1_pareto", 1.5, n, 0.0), make_rng(1))
    assert stats.kstest(a, lambda t: pareto_cdf(t, 1.5)).statistic < 0.01
    b = gen_series(ModelConfig("max_ar1_frechet", 1.5, n, 0.0), make_rng(2))
    assert stats.kstest(b, lambda t: frechet_cdf(t, FrechetParams(1.5))).statistic < 0.01


def test_max_ar1_stationary_marginal():
    x = gen_series(ModelConfig("max_ar1_frechet", 1.5, 100_000, 0.9), make_rng(3))
    scale = (1 - 0.9 ** 1.5) ** (-1 / 1.5)
    assert stats.kstest(x, lambda t: frechet_cdf(t, FrechetParams(1.5, scale))).statistic < 0.01
    # the first value already follows the stationary law
    first = np.array([gen_series(ModelConfig("max_ar1_frechet", 1.5, 2, 0.9), make_rng(4, i))[0] for i in range(3000)])
    assert stats.kstest(first, lambda t: frechet_cdf(t, FrechetParams(1.5, scale))).pvalue > 0.001


def test_moving_maxima_definition():
    cfg = ModelConfig("moving_maxima", 1.0, 6, coefficients=(1.0, 0.5, 0.25))
    x = gen_series(cfg, make_rng(5))
    z = frechet_sample(FrechetParams(1.0), make_rng(5), 8)
    ref = [max(1.0 * z[k + 2], 0.5 * z[k + 1], 0.25 * z[k]) for k in range(6)]
    assert x.tolist() == ref


@pytest.mark.parametrize(
    "cfg",
    [
        ModelConfig("iid_pareto", 1.5, 1_000_000),
        ModelConfig("iid_frechet", 1.5, 1_000_000),
        ModelConfig("ar1_pareto", 1.5, 1_000_000, 0.5),
        ModelConfig("max_ar1_frechet", 1.5, 1_000_000, 0.7),
        ModelConfig("moving_maxima", 1.5, 1_000_000, coefficients=(1.0, 0.9)),
        ModelConfig("moving_maxima", 1.5, 1_000_000, coefficients=(1.0, 0.5), innovations="pareto"),
    ],
    ids=lambda c: c.variant + "-" + c.innovations,
)
def test_tail_slope(cfg):
    x = np.sort(gen_series(cfg, make_rng(6)))[::-1]
    k = np.arange(1, 1001)
    # survival over the top 0.1% of the sample
    slope = np.polyfit(np.log(x[:1000]), np.log(k / x.size), 1)[0]
    assert slope == pytest.approx(-1.5, abs=0.15)


def test_extremal_index_closed_form():
    assert extremal_index_moving_maxima([1.0], 2.0) == 1.0
    assert extremal_index_moving_maxima([1.0, 1.0], 0.7) == 0.5
    assert extremal_index_moving_maxima([1.0, 0.9], 1.0) == pytest.approx(1 / 1.9, rel=1e-15)
    assert extremal_index_moving_maxima([1.0, 0.9], 1.0) == pytest.approx(0.526316, abs=1e-6)
    for bad in ([], [1.0, -1.0]):
        with pytest.raises(ConfigError):
            extremal_index_moving_maxima(bad, 1.0)
    with pytest.raises(ConfigError):
        extremal_index_moving_maxima([1.0], 0.0)


def blocks_estimator(x, block, u):
    """Extremal-index oracle: -(n/b) log(1 - K/m) / N over blocks of size b."""
    m = x.size // block
    blocks = x[: m * block].reshape(m, block)
    k_exceed = np.count_nonzero(blocks.max(axis=1) > u)
    n_exceed = np.count_nonzero(x[: m * block] > u)
    return math.log(1 - k_exceed / m) / (block * math.log(1 - n_exceed / (m * block)))


def test_extremal_index_simulated():
    x = gen_series(ModelConfig("moving_maxima", 1.0, 1_000_000, coefficients=(1.0, 0.9)), make_rng(7))
    theta = blocks_estimator(x, 100, np.quantile(x, 0.999))
    assert abs(theta - 1 / 1.9) < 0.05
