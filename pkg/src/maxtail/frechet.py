"""Fréchet and Pareto laws: cdf, quantile, samplers and log-moments.

All samplers use inverse-transform sampling on uniforms drawn from a
:class:`numpy.random.Generator` (PCG64 unless the caller supplies another).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

EULER_GAMMA = 0.57721566490153286061
LN2 = math.log(2.0)

# largest double below 1 and smallest positive double
_U_HI = float(np.nextafter(1.0, 0.0))
_U_LO = float(np.nextafter(0.0, 1.0))


@dataclass(frozen=True)
class FrechetParams:
    alpha: float
    sigma: float = 1.0

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ParameterError(f"alpha must be > 0, got {self.alpha!r}")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ParameterError(f"sigma must be > 0, got {self.sigma!r}")


@dataclass(frozen=True)
class ParetoParams:
    alpha: float
    xm: float = 1.0

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ParameterError(f"alpha must be > 0, got {self.alpha!r}")
        if not (self.xm > 0 and math.isfinite(self.xm)):
            raise ParameterError(f"xm must be > 0, got {self.xm!r}")


def _clamp_uniform(u):
    return np.clip(u, _U_LO, _U_HI)


def frechet_cdf(x, params: FrechetParams):
    """P{Z <= x} = exp(-(x/sigma)^-alpha) for x > 0, and 0 otherwise."""
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-((x[pos] / params.sigma) ** -params.alpha))
    return out[()] if out.ndim == 0 else out


def frechet_quantile(u, params: FrechetParams):
    u = np.asarray(u, dtype=np.float64)
    if np.any(~((u > 0) & (u < 1))):
        raise ParameterError("quantile level must lie in the open interval (0, 1)")
    out = params.sigma * (-np.log(u)) ** (-1.0 / params.alpha)
    return out[()] if out.ndim == 0 else out


def frechet_sample(params: FrechetParams, rng: np.random.Generator, size=None):
    u = _clamp_uniform(rng.random(size))
    out = params.sigma * (-np.log(u)) ** (-1.0 / params.alpha)
    return float(out) if size is None else out


def log2_standard_frechet(rng: np.random.Generator, size, alpha=1.0):
    """log2 of standard alpha-Fréchet draws, without the power/log round trip."""
    u = _clamp_uniform(rng.random(size))
    return -np.log2(-np.log(u)) / alpha


def pareto_sample(params: ParetoParams, rng: np.random.Generator, size=None):
    # 1 - random() lies in (0, 1], so U^(-1/alpha) stays finite
    u = 1.0 - rng.random(size)
    out = params.xm * u ** (-1.0 / params.alpha)
    return float(out) if size is None else out


def log2_frechet_moments(alpha):
    """Mean and variance of log2 Z for a standard alpha-Fréchet Z.

    ln Z is Gumbel with location 0 and scale 1/alpha, hence
    mean = gamma_E / (alpha ln 2) and var = pi^2 / (6 alpha^2 ln^2 2).
    """
    if not (alpha > 0):
        raise ParameterError(f"alpha must be > 0, got {alpha!r}")
    mean = EULER_GAMMA / (alpha * LN2)
    var = math.pi ** 2 / (6.0 * alpha ** 2 * LN2 ** 2)
    return mean, var
