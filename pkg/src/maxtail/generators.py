"""Synthetic heavy-tailed series with known tail exponent and dependence.

Variants
--------
iid_pareto
    P{X > x} = x^-alpha, x > 1.
iid_frechet
    standard alpha-Fréchet.
ar1_pareto
    X(k) = phi X(k-1) + Z(k) with Pareto innovations, after a burn-in of
    10 * ceil(1 / (1 - phi)) discarded values.
max_ar1_frechet
    X(k) = max(phi X(k-1), Z(k)) with standard alpha-Fréchet Z, started from
    the stationary law (Fréchet with scale (1 - phi^alpha)^(-1/alpha)).
moving_maxima
    X(k) = max_i a_i Z(k - i + 1), i = 1..m, with Fréchet (default) or Pareto Z.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ._backend import kernels as _kernels
from .errors import ConfigError
from .frechet import FrechetParams, ParetoParams, frechet_sample, pareto_sample
from .rng import make_rng

__all__ = ["VARIANTS", "ModelConfig", "gen_series", "extremal_index_moving_maxima", "burn_in_length"]

VARIANTS = ("iid_pareto", "iid_frechet", "ar1_pareto", "max_ar1_frechet", "moving_maxima")


@dataclass(frozen=True)
class ModelConfig:
    variant: str
    alpha: float
    n: int
    phi: float = 0.0
    coefficients: tuple = field(default=(1.0,))
    innovations: str = "frechet"
    seed: int | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ConfigError(f"alpha must be > 0, got {self.alpha!r}")
        if not (0 <= self.phi < 1):
            raise ConfigError(f"phi must lie in [0, 1), got {self.phi!r}")
        if int(self.n) != self.n or self.n < 2:
            raise ConfigError(f"n must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "coefficients", tuple(float(a) for a in self.coefficients))
        if self.variant == "moving_maxima":
            if not self.coefficients:
                raise ConfigError("moving_maxima needs at least one coefficient")
            if any(not (a > 0) for a in self.coefficients):
                raise ConfigError("moving-maxima coefficients must be > 0")
        if self.innovations not in ("frechet", "pareto"):
            raise ConfigError(f"innovations must be 'frechet' or 'pareto', got {self.innovations!r}")

    def with_seed(self, seed) -> "ModelConfig":
        d = asdict(self)
        d["seed"] = seed
        return ModelConfig(**d)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["coefficients"] = list(self.coefficients)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ModelConfig":
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown model fields: {sorted(extra)}")
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None


def burn_in_length(phi: float) -> int:
    # round first: 1 / (1 - 0.9) is 10.000000000000002 in floating point
    return 10 * math.ceil(round(1.0 / (1.0 - phi), 9))


def gen_series(cfg: ModelConfig, rng: np.random.Generator | None = None) -> np.ndarray:
    """Generate cfg.n values. Uses ``rng`` if given, else a stream from cfg.seed."""
    if rng is None:
        if cfg.seed is None:
            raise ConfigError("either a seed in the config or an rng is required")
        rng = make_rng(cfg.seed)
    n, a = int(cfg.n), cfg.alpha
    if cfg.variant == "iid_pareto":
        return pareto_sample(ParetoParams(a), rng, n)
    if cfg.variant == "iid_frechet":
        return frechet_sample(FrechetParams(a), rng, n)
    if cfg.variant == "ar1_pareto":
        b = burn_in_length(cfg.phi)
        z = pareto_sample(ParetoParams(a), rng, n + b)
        x = _kernels.ar1(z, float(cfg.phi), 0.0)
        return x[b:]
    if cfg.variant == "max_ar1_frechet":
        z = frechet_sample(FrechetParams(a), rng, n)
        x0 = frechet_sample(FrechetParams(a, (1.0 - cfg.phi ** a) ** (-1.0 / a)), rng)
        # x0 stands for X(0); X(1) = max(phi X(0), Z(1))
        return _kernels.max_ar1(z, float(cfg.phi), x0)
    # moving maxima
    coef = np.asarray(cfg.coefficients)
    m = coef.shape[0]
    if cfg.innovations == "frechet":
        z = frechet_sample(FrechetParams(a), rng, n + m - 1)
    else:
        z = pareto_sample(ParetoParams(a), rng, n + m - 1)
    # z[m-1+k] is Z_k; X_k = max_i a_i Z_{k-i+1}
    x = coef[0] * z[m - 1 :]
    for i in range(1, m):
        np.maximum(x, coef[i] * z[m - 1 - i : m - 1 - i + n], out=x)
    return x


def extremal_index_moving_maxima(a, alpha: float) -> float:
    """theta = max_i a_i^alpha / sum_i a_i^alpha."""
    a = np.asarray(a, dtype=np.float64)
    if a.size == 0:
        raise ConfigError("empty coefficient vector")
    if np.any(~(a > 0)) or not (alpha > 0):
        raise ConfigError("coefficients and alpha must be > 0")
    p = a ** alpha
    return float(p.max() / p.sum())
