"""Regression estimators of H = 1/alpha from a max-spectrum, with CIs.

Weights w_j over scales j1..j2 minimise w' C w subject to sum(w) = 0 and
sum(j w_j) = 1, so that H_hat = sum(w_j Y_j) recovers the slope of an exact
line. C is the identity (ols), the diagonal of Sigma1 (wls) or Sigma1 itself
(gls), with Sigma1 taken relative to the base scale j0 = j1 - 1.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy import stats

from .covariance import CovarianceModel, default_sigma1
from .errors import (
    CovarianceError,
    DegenerateEstimateError,
    InstabilityWarning,
    ParameterError,
    RangeError,
)
from .frechet import log2_standard_frechet
from .rng import child_seed, make_rng
from .spectrum import MaxSpectrum

__all__ = [
    "METHODS",
    "ScaleRange",
    "WeightVector",
    "ConfidenceInterval",
    "TailEstimate",
    "regression_weights",
    "estimate",
    "asymptotic_ci",
    "montecarlo_ci",
    "montecarlo_cis",
    "frechet_pivot_sample",
    "pivot_scale_invariance_check",
]

METHODS = ("ols", "wls", "gls")


@dataclass(frozen=True)
class ScaleRange:
    j1: int
    j2: int

    def __post_init__(self):
        if int(self.j1) != self.j1 or int(self.j2) != self.j2:
            raise RangeError("scales must be integers")
        if self.j1 < 1:
            raise RangeError(f"j1 must be >= 1, got {self.j1}")
        if self.j2 - self.j1 < 1:
            raise RangeError(f"need at least two scales, got ({self.j1}, {self.j2})")

    @property
    def ell(self) -> int:
        return self.j2 - self.j1 + 1

    @property
    def scales(self) -> np.ndarray:
        return np.arange(self.j1, self.j2 + 1)

    @property
    def base(self) -> int:
        return self.j1 - 1


@dataclass(frozen=True, eq=False)
class WeightVector:
    weights: np.ndarray
    range: ScaleRange

    def __post_init__(self):
        if self.weights.shape != (self.range.ell,):
            raise RangeError("weight vector length does not match the scale range")

    def constraint_residuals(self):
        j = self.range.scales
        return float(self.weights.sum()), float((j * self.weights).sum() - 1.0)

    def apply(self, y_range) -> float:
        return float(np.dot(self.weights, y_range))

    def padded(self, j_lo: int, j_hi: int) -> np.ndarray:
        """Weights laid out over scales j_lo..j_hi, zero elsewhere."""
        out = np.zeros(j_hi - j_lo + 1)
        out[self.range.j1 - j_lo : self.range.j2 - j_lo + 1] = self.weights
        return out


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float
    kind: str
    unbounded: bool = False
    excluded: int = 0

    def __contains__(self, value) -> bool:
        return self.lower <= value <= self.upper

    def as_dict(self):
        return {
            "lower": self.lower,
            "upper": self.upper if math.isfinite(self.upper) else "inf",
            "level": self.level,
            "kind": self.kind,
            "unbounded": self.unbounded,
            "excluded": self.excluded,
        }


@dataclass(frozen=True, eq=False)
class TailEstimate:
    h: float
    alpha: float
    range: ScaleRange
    method: str
    c_w: float
    n_eff: int
    weights: WeightVector
    ci: ConfidenceInterval | None = None

    def with_ci(self, ci):
        return replace(self, ci=ci)


def _check_method(method):
    if method not in METHODS:
        raise ParameterError(f"method must be one of {METHODS}, got {method!r}")


def _count_scaling(block_counts, ell):
    """Per-scale factors correcting Var(Y_j) ~ 1/n_j for non-dyadic n.

    Equals one everywhere when n_j halves exactly from scale to scale.
    """
    if block_counts is None:
        return np.ones(ell)
    nc = np.asarray(block_counts, dtype=np.float64)
    if nc.shape != (ell,) or np.any(nc <= 0):
        raise RangeError("block_counts must hold one positive count per scale")
    ideal = nc[0] / 2.0 ** np.arange(ell)
    return np.sqrt(ideal / nc)


def _design_cov(rng: ScaleRange, method, cov, block_counts):
    ell = rng.ell
    if method == "ols":
        return np.eye(ell)
    if cov is None:
        cov = default_sigma1(ell)
    if cov.ell < ell:
        raise CovarianceError(f"covariance has dimension {cov.ell}, range needs {ell}")
    s = cov.sigma1[:ell, :ell]
    d = _count_scaling(block_counts, ell)
    c = s * np.outer(d, d)
    if method == "wls":
        c = np.diag(np.diag(c))
    return c


def regression_weights(
    rng: ScaleRange,
    method: str = "wls",
    cov: CovarianceModel | None = None,
    block_counts=None,
) -> WeightVector:
    _check_method(method)
    ell = rng.ell
    c = _design_cov(rng, method, cov, block_counts)
    ev = np.linalg.eigvalsh(c)
    if ev[0] <= 1e-12 * ev[-1]:
        raise CovarianceError("covariance is singular or not positive definite")
    # centred scale index: same constraint set, better conditioned
    jc = rng.scales - rng.scales.mean()
    a = np.vstack([np.ones(ell), jc])
    ci_at = np.linalg.solve(c, a.T)
    m = a @ ci_at
    w = ci_at @ np.linalg.solve(m, np.array([0.0, 1.0]))
    return WeightVector(w, rng)


def rounding_bound(weights, y) -> float:
    """Bound on the rounding error of sum(w * y); slopes below it have no reliable sign."""
    terms = np.abs(np.asarray(weights) * np.asarray(y))
    return 4.0 * len(terms) * np.finfo(np.float64).eps * float(terms.sum())


def _validate_range(spectrum: MaxSpectrum, rng: ScaleRange):
    if rng.j2 > spectrum.scale_count:
        raise RangeError(f"j2 = {rng.j2} exceeds the {spectrum.scale_count} available scales")
    if spectrum.n_at(rng.j2) < 1:
        raise RangeError(f"no complete block at scale {rng.j2}")


def effective_count(spectrum: MaxSpectrum, rng: ScaleRange) -> int:
    """n_{j1 - 1}; for j1 = 1 the convention 2 n_1 is used."""
    if rng.j1 >= 2:
        return spectrum.n_at(rng.j1 - 1)
    return 2 * spectrum.n_at(1)


def estimate(
    spectrum: MaxSpectrum,
    rng: ScaleRange,
    method: str = "wls",
    cov: CovarianceModel | None = None,
) -> TailEstimate:
    _validate_range(spectrum, rng)
    ell = rng.ell
    if cov is None:
        cov = default_sigma1(ell)
    counts = [spectrum.n_at(j) for j in rng.scales]
    w = regression_weights(rng, method, cov, counts)
    y = spectrum.y[rng.j1 - 1 : rng.j2]
    h = w.apply(y)
    if not (h > rounding_bound(w.weights, y)):
        raise DegenerateEstimateError(h)
    s = cov.sigma1[:ell, :ell]
    c_w = float(w.weights @ s @ w.weights)
    return TailEstimate(h, 1.0 / h, rng, method, c_w, effective_count(spectrum, rng), w)


def asymptotic_ci(est: TailEstimate, level: float = 0.95) -> ConfidenceInterval:
    """Reciprocal of the symmetric normal interval for H."""
    if not (0 < level < 1):
        raise ParameterError("level must lie in (0, 1)")
    if not (est.h > 0):
        raise DegenerateEstimateError(est.h)
    z = stats.norm.ppf((1.0 + level) / 2.0)
    delta = est.h * z * math.sqrt(est.c_w / est.n_eff)
    lower = 1.0 / (est.h + delta)
    hi_h = est.h - delta
    if hi_h > 0:
        return ConfidenceInterval(lower, 1.0 / hi_h, level, "asymptotic")
    return ConfidenceInterval(lower, math.inf, level, "asymptotic", unbounded=True)


def frechet_pivot_sample(weights: WeightVector, r: int, reps: int, seed, alpha: float = 1.0, chunk: int = 500):
    """H_F = sum_i w_i Y_i^Z over reps paths of r i.i.d. alpha-Fréchet values.

    Y_i^Z are the spectrum values at scales 1..ell of each path. Paths are
    drawn in fixed-size chunks, each from its own child seed, so results do
    not depend on how the work is split.
    """
    ell = weights.range.ell
    if r < 2 ** ell:
        raise ParameterError(f"r = {r} is smaller than 2^ell = {2 ** ell}")
    n_chunks = -(-reps // chunk)
    out = np.empty(reps)
    w = weights.weights
    for c in range(n_chunks):
        m = min(chunk, reps - c * chunk)
        g = log2_standard_frechet(make_rng(seed, c), (m, r), alpha)
        y = np.empty((m, ell))
        buf = g
        for i in range(ell):
            half = buf.shape[1] // 2
            buf = np.maximum(buf[:, 0 : 2 * half : 2], buf[:, 1 : 2 * half : 2])
            y[:, i] = buf.mean(axis=1)
        out[c * chunk : c * chunk + m] = y @ w
    return out


def montecarlo_ci(
    est: TailEstimate,
    r: int | None = None,
    weights: WeightVector | None = None,
    reps: int = 1000,
    level: float = 0.95,
    seed=None,
) -> ConfidenceInterval:
    """Interval from the simulated law of alpha_F = 1/H_F on 1-Fréchet paths.

    alpha_hat / alpha is approximately distributed as alpha_F (the law does
    not depend on alpha), so with q_lo, q_hi the empirical quantiles of
    alpha_F the interval is (alpha_hat / q_hi, alpha_hat / q_lo). Paths with
    H_F <= 0 are dropped and counted in ``excluded``.
    """
    return montecarlo_cis(est, [level], r, weights, reps, seed)[0]


def montecarlo_cis(est, levels, r=None, weights=None, reps=1000, seed=None):
    """:func:`montecarlo_ci` for several levels from one set of simulated paths."""
    for level in levels:
        if not (0 < level < 1):
            raise ParameterError("level must lie in (0, 1)")
    if reps < 500:
        raise ParameterError("montecarlo_ci needs reps >= 500")
    if not (est.h > 0):
        raise DegenerateEstimateError(est.h)
    weights = est.weights if weights is None else weights
    r = est.n_eff if r is None else r
    h_f = frechet_pivot_sample(weights, r, reps, seed)
    good = h_f > 0
    excluded = int(reps - good.sum())
    if excluded > 0.05 * reps:
        warnings.warn(
            f"{excluded} of {reps} simulated paths gave H_F <= 0", InstabilityWarning, stacklevel=3
        )
    a_f = 1.0 / h_f[good]
    out = []
    for level in levels:
        q_lo, q_hi = np.quantile(a_f, [(1.0 - level) / 2.0, (1.0 + level) / 2.0])
        out.append(ConfidenceInterval(est.alpha / q_hi, est.alpha / q_lo, level, "montecarlo", excluded=excluded))
    return out


@dataclass(frozen=True)
class PivotCheck:
    alpha: float
    statistic: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.statistic < self.threshold

    def __bool__(self):
        return self.passed


def pivot_scale_invariance_check(
    alpha: float,
    ell: int = 4,
    reps: int = 5000,
    seed=0,
    paired: bool = False,
    threshold: float = 0.05,
) -> PivotCheck:
    """KS distance between alpha_F from alpha-Fréchet paths and alpha * alpha_F from 1-Fréchet paths.

    With ``paired`` both samples come from the same uniforms, so the
    distance measures only the exactness of the rescaling; otherwise the
    two samples are independent.
    """
    if not (alpha > 0):
        raise ParameterError("alpha must be > 0")
    w = regression_weights(ScaleRange(1, ell), "wls")
    r = 2 ** ell
    s_a, s_1 = (child_seed(seed, 0), child_seed(seed, 0)) if paired else (child_seed(seed, 0), child_seed(seed, 1))
    h_a = frechet_pivot_sample(w, r, reps, s_a, alpha=alpha)
    h_1 = frechet_pivot_sample(w, r, reps, s_1, alpha=1.0)
    a_alpha, a_one = 1.0 / h_a[h_a > 0], alpha / h_1[h_1 > 0]
    ks = stats.ks_2samp(a_alpha, a_one).statistic
    return PivotCheck(alpha, float(ks), threshold)
