"""Hill estimator and Hill plot.

Only the top k+1 order statistics are needed, so they are selected with
``numpy.partition`` (introselect, O(n)) and only those are sorted.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateEstimateWarning, InsufficientDataError, RangeError
from .spectrum import check_positive

__all__ = ["HillPlot", "top_order_statistics", "hill_estimate", "hill_plot", "default_k_max"]


@dataclass(frozen=True, eq=False)
class HillPlot:
    k: np.ndarray
    alpha_hat: np.ndarray

    @property
    def degenerate(self) -> np.ndarray:
        return ~np.isfinite(self.alpha_hat)

    def rows(self):
        return list(zip(self.k.tolist(), self.alpha_hat.tolist()))


def top_order_statistics(series, count: int) -> np.ndarray:
    """X_(1) >= ... >= X_(count), without sorting the whole array."""
    x = np.asarray(series, dtype=np.float64)
    n = x.shape[0]
    if count >= n:
        top = np.sort(x)
    else:
        top = np.sort(np.partition(x, n - count)[n - count :])
    return top[::-1]


def _curve(top: np.ndarray) -> np.ndarray:
    logs = np.log(top)
    k = np.arange(1, top.shape[0])
    mean_log = np.cumsum(logs[:-1]) / k
    denom = mean_log - logs[1:]
    with np.errstate(divide="ignore"):
        out = 1.0 / denom
    out[denom <= 0] = np.inf
    return out


def _validate(series, k):
    x = np.asarray(series, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] < 2:
        raise InsufficientDataError("need at least 2 observations")
    check_positive(x)
    n = x.shape[0]
    if int(k) != k or not (1 <= k <= n - 1):
        raise RangeError(f"k must satisfy 1 <= k <= n - 1 = {n - 1}, got {k}")
    return x


def hill_estimate(series, k: int) -> float:
    """alpha_H(k) = (mean(ln X_(1..k)) - ln X_(k+1))^-1.

    Returns ``inf`` (with a warning) when the top k+1 values coincide.
    """
    x = _validate(series, k)
    val = float(_curve(top_order_statistics(x, k + 1))[k - 1])
    if not np.isfinite(val):
        warnings.warn(f"Hill estimate at k={k} is degenerate (tied order statistics)", DegenerateEstimateWarning, stacklevel=2)
    return val


def default_k_max(n: int) -> int:
    return max(1, min(n - 1, n // 10))


def hill_plot(series, k_max: int | None = None) -> HillPlot:
    x = np.asarray(series, dtype=np.float64)
    if k_max is None:
        k_max = default_k_max(x.shape[0])
    x = _validate(x, k_max)
    alpha_hat = _curve(top_order_statistics(x, k_max + 1))
    return HillPlot(np.arange(1, k_max + 1), alpha_hat)
