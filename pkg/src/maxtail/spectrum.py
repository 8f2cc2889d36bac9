"""Dyadic max-spectrum, in batch and as an O(log n) streaming summary.

For a series X(1..n), the block maxima at scale j are

    D(j, k) = max{X(2^j (k-1) + i) : 1 <= i <= 2^j},   k = 1..n_j,  n_j = floor(n / 2^j)

and the spectrum is Y_j = mean_k log2 D(j, k). Values past the last complete
block at a scale never enter Y_j.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels as _kernels
from .errors import InsufficientDataError, PositivityError

__all__ = [
    "MaxSpectrum",
    "StreamState",
    "compute_spectrum_batch",
    "stream_update",
    "finalize",
    "block_maxima",
    "check_positive",
]

# 2^63 observations is beyond any int64 counter anyway
_CAPACITY = 64


@dataclass(frozen=True, eq=False)
class MaxSpectrum:
    """Y_j and n_j for scales j = 1..J.

    ``y[j - 1]`` and ``counts[j - 1]`` belong to scale ``j``.
    """

    y: np.ndarray
    counts: np.ndarray
    total_count: int

    @property
    def scale_count(self) -> int:
        return int(self.y.shape[0])

    @property
    def scales(self) -> np.ndarray:
        return np.arange(1, self.scale_count + 1)

    def at(self, j: int) -> float:
        return float(self.y[j - 1])

    def n_at(self, j: int) -> int:
        """n_j, with n_0 = n for the raw series."""
        if j == 0:
            return self.total_count
        return int(self.counts[j - 1])

    def shifted(self, c: float) -> "MaxSpectrum":
        return MaxSpectrum(self.y + c, self.counts.copy(), self.total_count)

    def __eq__(self, other):
        if not isinstance(other, MaxSpectrum):
            return NotImplemented
        return (
            self.total_count == other.total_count
            and np.array_equal(self.counts, other.counts)
            and np.array_equal(self.y, other.y)
        )

    def rows(self):
        """(j, n_j, Y_j) triples."""
        return [(j, self.n_at(j), self.at(j)) for j in range(1, self.scale_count + 1)]

    @classmethod
    def from_values(cls, y, counts=None, total_count=None):
        """Build a spectrum directly from Y_j values (synthetic or external).

        Missing block counts default to the dyadic counts of n = 2^J.
        """
        y = np.asarray(y, dtype=np.float64)
        J = y.shape[0]
        if counts is None:
            counts = 2 ** np.arange(J - 1, -1, -1, dtype=np.int64)
            total_count = 2 ** J if total_count is None else total_count
        counts = np.asarray(counts, dtype=np.int64)
        if total_count is None:
            total_count = int(counts[0]) * 2
        return cls(y, counts, int(total_count))


def check_positive(x, offset=0):
    x = np.asarray(x, dtype=np.float64)
    bad = ~(x > 0)
    if bad.any():
        i = int(np.argmax(bad))
        raise PositivityError(
            f"observation {offset + i} is {x[i]!r}; all values must be > 0", index=offset + i
        )
    return x


def compute_spectrum_batch(series) -> MaxSpectrum:
    x = np.ascontiguousarray(series, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] < 2:
        raise InsufficientDataError("need at least 2 observations for a max-spectrum")
    check_positive(x)
    sums, counts = _kernels.block_log_sums(x)
    return MaxSpectrum(sums / counts, counts, int(x.shape[0]))


def block_maxima(series, j: int) -> np.ndarray:
    """D(j, 1..n_j) computed directly (no recursion)."""
    x = np.asarray(series, dtype=np.float64)
    b = 2 ** j
    nj = x.shape[0] // b
    return x[: nj * b].reshape(nj, b).max(axis=1)


class StreamState:
    """Running max-spectrum summary with O(log n) memory.

    Internally scale j keeps the maximum of the pending half-block that is
    waiting for its partner (a binary-counter cascade). When two half-blocks
    meet, the scale-j block is complete: log2 of its maximum is added to the
    scale's running sum and the maximum is carried one scale up.
    """

    __slots__ = ("_carry", "_log_sum", "_completed", "total_count")

    def __init__(self):
        self._carry = np.zeros(_CAPACITY, dtype=np.float64)
        self._log_sum = np.zeros(_CAPACITY, dtype=np.float64)
        self._completed = np.zeros(_CAPACITY, dtype=np.int64)
        self.total_count = 0

    def update(self, x: float) -> "StreamState":
        return self.extend(np.array([x], dtype=np.float64))

    def extend(self, values) -> "StreamState":
        """Feed a chunk of observations in order."""
        v = np.ascontiguousarray(values, dtype=np.float64).ravel()
        check_positive(v, offset=self.total_count)
        self.total_count = int(
            _kernels.stream_extend(self._carry, self._log_sum, self._completed, v, self.total_count)
        )
        return self

    @property
    def scale_count(self) -> int:
        """Scales holding any data, at most floor(log2 n) + 1."""
        return int(self.total_count).bit_length()

    @property
    def completed(self) -> np.ndarray:
        J = max(self.scale_count - 1, 0)
        return self._completed[:J].copy()

    @property
    def log_sum(self) -> np.ndarray:
        J = max(self.scale_count - 1, 0)
        return self._log_sum[:J].copy()

    @property
    def partial_max(self) -> list:
        """Maximum of the observations in the incomplete block at each scale.

        Entry j - 1 is the maximum over X(i), 2^j n_j < i <= n (None if empty).
        """
        out = []
        running = 0.0
        for j in range(max(self.scale_count, 1)):
            c = float(self._carry[j])
            if c > running:
                running = c
            out.append(running if running > 0.0 else None)
        return out

    def copy(self) -> "StreamState":
        new = StreamState()
        new._carry[:] = self._carry
        new._log_sum[:] = self._log_sum
        new._completed[:] = self._completed
        new.total_count = self.total_count
        return new

    def __len__(self):
        return self.total_count


def stream_update(state: StreamState, x: float) -> StreamState:
    """Feed one observation; mutates and returns ``state``."""
    return state.update(x)


def finalize(state: StreamState) -> MaxSpectrum:
    """Snapshot the current spectrum. The state is left untouched."""
    if state.total_count < 2:
        raise InsufficientDataError("no completed block at any scale (need >= 2 observations)")
    J = state.scale_count - 1
    counts = state._completed[:J].copy()
    sums = state._log_sum[:J].copy()
    return MaxSpectrum(sums / counts, counts, int(state.total_count))
