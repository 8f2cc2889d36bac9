"""Pure-Python kernels, used when the compiled core is unavailable.

Every function mirrors ``maxtail._core`` operation for operation so the two
backends agree bit for bit (``math.log2`` and the C ``log2`` are the same
libm routine, sums are accumulated left to right in both).
"""
import math

import numpy as np


def block_log_sums(x):
    x = np.ascontiguousarray(x, dtype=np.float64)
    n = x.shape[0]
    n_scales = n.bit_length() - 1 if n >= 2 else 0
    sums = np.zeros(n_scales, dtype=np.float64)
    counts = np.zeros(n_scales, dtype=np.int64)
    buf = x
    for j in range(n_scales):
        m = buf.shape[0] // 2
        buf = np.maximum(buf[0:2 * m:2], buf[1:2 * m:2])
        s = 0.0
        for v in buf.tolist():
            s += math.log2(v)
        sums[j] = s
        counts[j] = m
    return sums, counts


def stream_extend(carry, log_sum, completed, x, total):
    cap = carry.shape[0]
    c_list = carry.tolist()
    s_list = log_sum.tolist()
    k_list = completed.tolist()
    log2 = math.log2
    for v in np.asarray(x, dtype=np.float64).tolist():
        total += 1
        j = 0
        while j < cap:
            c = c_list[j]
            if c == 0.0:
                c_list[j] = v
                break
            if c > v:
                v = c
            c_list[j] = 0.0
            s_list[j] += log2(v)
            k_list[j] += 1
            j += 1
    carry[:] = c_list
    log_sum[:] = s_list
    completed[:] = k_list
    return total


def max_ar1(z, phi, x0):
    out = []
    prev = float(x0)
    for zk in np.asarray(z, dtype=np.float64).tolist():
        v = phi * prev
        if zk > v:
            v = zk
        out.append(v)
        prev = v
    return np.array(out, dtype=np.float64)


def ar1(z, phi, x0):
    out = []
    prev = float(x0)
    for zk in np.asarray(z, dtype=np.float64).tolist():
        prev = phi * prev + zk
        out.append(prev)
    return np.array(out, dtype=np.float64)
