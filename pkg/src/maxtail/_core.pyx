# cython: language_level=3
"""Compiled kernels. Must stay numerically identical to ``maxtail._pure``."""
import numpy as np
from libc.math cimport log2


def block_log_sums(const double[::1] x):
    """Per-scale sums of log2 dyadic block maxima, scales 1..floor(log2 n)."""
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t m = n // 2
    cdef Py_ssize_t k, j = 0
    cdef double a, b, s
    cdef int n_scales = 0
    cdef Py_ssize_t t = n
    while t >= 2:
        t //= 2
        n_scales += 1
    sums = np.zeros(n_scales, dtype=np.float64)
    counts = np.zeros(n_scales, dtype=np.int64)
    cdef double[::1] sums_v = sums
    cdef long long[::1] counts_v = counts
    if n_scales == 0:
        return sums, counts
    buf = np.empty(m, dtype=np.float64)
    cdef double[::1] b_v = buf
    # scale 1 straight from the input
    s = 0.0
    for k in range(m):
        a = x[2 * k]
        b = x[2 * k + 1]
        if b > a:
            a = b
        b_v[k] = a
        s += log2(a)
    sums_v[0] = s
    counts_v[0] = m
    for j in range(1, n_scales):
        m //= 2
        s = 0.0
        for k in range(m):
            a = b_v[2 * k]
            b = b_v[2 * k + 1]
            if b > a:
                a = b
            b_v[k] = a
            s += log2(a)
        sums_v[j] = s
        counts_v[j] = m
    return sums, counts


def stream_extend(double[::1] carry, double[::1] log_sum, long long[::1] completed,
                  const double[::1] x, long long total):
    """Feed values through the dyadic carry cascade in place; returns new total.

    ``carry[j]`` holds the maximum of the pending half-block at scale j+1
    (0.0 means empty). Capacity is ``carry.shape[0]`` scales.
    """
    cdef Py_ssize_t i, j
    cdef Py_ssize_t cap = carry.shape[0]
    cdef double v, c
    for i in range(x.shape[0]):
        v = x[i]
        total += 1
        j = 0
        while j < cap:
            c = carry[j]
            if c == 0.0:
                carry[j] = v
                break
            if c > v:
                v = c
            carry[j] = 0.0
            log_sum[j] += log2(v)
            completed[j] += 1
            j += 1
    return total


def max_ar1(const double[::1] z, double phi, double x0):
    """X(k) = max(phi * X(k-1), Z(k)) started from X(0) = x0."""
    cdef Py_ssize_t n = z.shape[0]
    cdef Py_ssize_t k
    cdef double prev = x0, v
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    for k in range(n):
        v = phi * prev
        if z[k] > v:
            v = z[k]
        o[k] = v
        prev = v
    return out


def ar1(const double[::1] z, double phi, double x0):
    """X(k) = phi * X(k-1) + Z(k) started from X(0) = x0."""
    cdef Py_ssize_t n = z.shape[0]
    cdef Py_ssize_t k
    cdef double prev = x0, v
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    for k in range(n):
        v = phi * prev
        v = v + z[k]
        o[k] = v
        prev = v
    return out
