"""Automatic choice of the cut-off scale j1.

Starting from j1 = max(1, j2 - b), the range is extended one scale down at a
time. At each step H_new = H(j1 - 1, j2) is compared with H_old = H(j1, j2);
the loop stops at the first statistically significant difference (two-sided,
level p) and returns (j1, H_old).

The variance of H_new - H_old is u' C u * H_old^2 / n_{j0}, where u is the
difference of the two weight vectors over scales j1-1..j2 and C is Sigma1
relative to the base scale j0 = j1 - 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .covariance import CovarianceModel, default_sigma1
from .errors import ConfigError, DegenerateEstimateError, InsufficientDataError
from .estimator import METHODS, ScaleRange, TailEstimate, estimate, regression_weights
from .generators import gen_series
from .rng import make_rng
from .spectrum import MaxSpectrum, compute_spectrum_batch

__all__ = ["AutoSelectConfig", "SelectionStep", "Selection", "select_j1", "range_slope", "mse_curve"]


@dataclass(frozen=True)
class AutoSelectConfig:
    p: float = 0.01
    b: int = 4
    j2: int | None = None
    method: str = "gls"

    def __post_init__(self):
        if not (0 < self.p < 1):
            raise ConfigError(f"p must lie in (0, 1), got {self.p!r}")
        if int(self.b) != self.b or self.b < 2:
            raise ConfigError(f"back-start b must be an integer >= 2, got {self.b!r}")
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")

    @classmethod
    def for_data(cls, **kw):
        """Defaults used for data analysis (p = 0.1, b = 3)."""
        kw.setdefault("p", 0.1)
        kw.setdefault("b", 3)
        return cls(**kw)


@dataclass(frozen=True)
class SelectionStep:
    j1: int
    h_new: float
    h_old: float
    statistic: float
    threshold: float
    decision: str  # "extend" or "stop"

    def as_dict(self):
        return {
            "j1": self.j1,
            "h_new": self.h_new,
            "h_old": self.h_old,
            "statistic": self.statistic,
            "threshold": self.threshold,
            "decision": self.decision,
        }


@dataclass(frozen=True, eq=False)
class Selection:
    j1: int
    estimate: TailEstimate
    trace: list = field(default_factory=list)
    alternative_j1: int | None = None


def _h(spectrum, j1, j2, method, cov):
    w = regression_weights(ScaleRange(j1, j2), method, cov, [spectrum.n_at(j) for j in range(j1, j2 + 1)])
    return w, w.apply(spectrum.y[j1 - 1 : j2])


def range_slope(spectrum, j1, j2, method, cov=None) -> float:
    """H(j1, j2) without the positivity check of :func:`estimate`."""
    return _h(spectrum, j1, j2, method, cov)[1]


def select_j1(
    spectrum: MaxSpectrum,
    cfg: AutoSelectConfig = AutoSelectConfig(),
    cov: CovarianceModel | None = None,
) -> Selection:
    J = spectrum.scale_count
    j2 = J if cfg.j2 is None else int(cfg.j2)
    if j2 > J or j2 < 2:
        raise ConfigError(f"j2 = {j2} is outside the available scales 2..{J}")
    if J < cfg.b + 2:
        raise InsufficientDataError(f"need at least b + 2 = {cfg.b + 2} scales, spectrum has {J}")
    if cov is None or cov.ell < j2:
        cov = default_sigma1(j2)
    z = stats.norm.ppf(1.0 - cfg.p / 2.0)
    j1 = max(1, j2 - cfg.b)
    trace = []
    w_old, h_old = _h(spectrum, j1, j2, cfg.method, cov)
    stopped_at = None
    while j1 > 1:
        w_new, h_new = _h(spectrum, j1 - 1, j2, cfg.method, cov)
        u = w_new.weights - w_old.padded(j1 - 1, j2)
        ell = j2 - j1 + 2
        # offsets relative to j0 = j1 - 2 run from 1 to ell
        v = h_old ** 2 * float(u @ cov.sigma1[:ell, :ell] @ u) / spectrum.n_at(j1 - 2)
        stat = abs(h_new - h_old)
        thr = z * math.sqrt(max(v, 0.0))
        if stat > thr:
            trace.append(SelectionStep(j1, h_new, h_old, stat, thr, "stop"))
            stopped_at = j1
            break
        trace.append(SelectionStep(j1, h_new, h_old, stat, thr, "extend"))
        j1 -= 1
        w_old, h_old = w_new, h_new
    if not (h_old > 0):
        raise DegenerateEstimateError(h_old)
    est = estimate(spectrum, ScaleRange(j1, j2), cfg.method, cov)
    alt = j1 - 1 if stopped_at is not None else None
    return Selection(j1, est, trace, alt)


def mse_curve(model, true_h: float, reps: int = 100, j2: int | None = None, method: str = "gls", seed=0, j1_values=None):
    """Root-mean-squared error of H(j1, j2) across replicates, per j1.

    Returns ``(j1_values, rmse)``. ``model`` is a
    :class:`~maxtail.generators.ModelConfig`; replicate i uses stream (seed, i).
    """
    if reps < 1:
        raise ConfigError("reps must be >= 1")
    J = int(model.n).bit_length() - 1
    j2 = J if j2 is None else j2
    j1_values = list(range(1, j2)) if j1_values is None else list(j1_values)
    cov = default_sigma1(j2)
    sq = np.zeros(len(j1_values))
    for i in range(reps):
        sp = compute_spectrum_batch(gen_series(model, make_rng(seed, i)))
        for a, j1 in enumerate(j1_values):
            sq[a] += (range_slope(sp, j1, j2, method, cov) - true_h) ** 2
    return np.array(j1_values), np.sqrt(sq / reps)
