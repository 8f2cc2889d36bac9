import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from maxtail.errors import InsufficientDataError, PositivityError
from maxtail.frechet import FrechetParams, frechet_sample
from maxtail.rng import make_rng
from maxtail.spectrum import (
    MaxSpectrum,
    StreamState,
    block_maxima,
    compute_spectrum_batch,
    finalize,
    stream_update,
)

EIGHT = [1, 3, 2, 5, 4, 1, 2, 7]
# block maxima [3,5,4,7], [5,7], [7]
Y_EIGHT = [
    (math.log2(3) + math.log2(5) + math.log2(4) + math.log2(7)) / 4,
    (math.log2(5) + math.log2(7)) / 2,
    math.log2(7),
]

positive_series = arrays(
    np.float64,
    st.integers(2, 600),
    elements=st.floats(1e-300, 1e300, allow_nan=False, allow_infinity=False),
)


def reference_spectrum(x):
    """Y_j straight from the definition, one scale at a time."""
    x = np.asarray(x, dtype=np.float64)
    out = []
    j = 1
    while x.size // 2 ** j >= 1:
        d = block_maxima(x, j)
        out.append((j, d.size, sum(math.log2(v) for v in d.tolist()) / d.size))
        j += 1
    return out


def test_eight_value_example():
    sp = compute_spectrum_batch(EIGHT)
    assert sp.scale_count == 3
    assert sp.counts.tolist() == [4, 2, 1]
    assert sp.y.tolist() == pytest.approx(Y_EIGHT, rel=1e-15)
    assert sp.at(1) == pytest.approx(2.1785613794165304, rel=1e-15)
    assert sp.at(2) == pytest.approx(2.564641508472483, rel=1e-15)
    assert sp.at(3) == pytest.approx(2.807355, abs=1e-6)
    assert block_maxima(EIGHT, 1).tolist() == [3, 5, 4, 7]
    assert block_maxima(EIGHT, 2).tolist() == [5, 7]


def test_constant_series():
    sp = compute_spectrum_batch(np.full(100, 3.5))
    # a running sum of equal terms divided by the count, so round-off only
    assert sp.y.tolist() == pytest.approx([math.log2(3.5)] * sp.scale_count, rel=1e-14)
    assert sp.at(sp.scale_count) == math.log2(3.5)


def test_leftovers_excluded():
    x = [1, 1, 1, 1, 1, 1, 1000.0]
    sp = compute_spectrum_batch(x)
    assert sp.counts.tolist() == [3, 1]
    assert np.all(sp.y == 0.0)


def test_errors():
    with pytest.raises(InsufficientDataError):
        compute_spectrum_batch([3.0])
    with pytest.raises(PositivityError) as e:
        compute_spectrum_batch([1.0, 2.0, 0.0, 4.0])
    assert e.value.index == 2
    with pytest.raises(PositivityError):
        compute_spectrum_batch([1.0, -2.0])
    with pytest.raises(PositivityError):
        compute_spectrum_batch([1.0, math.nan])
    with pytest.raises(PositivityError):
        StreamState().update(-1.0)


@given(positive_series)
def test_batch_matches_definition(x):
    sp = compute_spectrum_batch(x)
    ref = reference_spectrum(x)
    assert sp.scale_count == len(ref) == int(x.size).bit_length() - 1
    for (j, nj, y), (j_, nj_, y_) in zip(sp.rows(), ref):
        assert (j, nj) == (j_, nj_)
        assert y == pytest.approx(y_, rel=1e-12, abs=1e-12)


@given(positive_series, st.integers(1, 97))
def test_stream_equals_batch(x, chunk):
    st_ = StreamState()
    for i in range(0, x.size, chunk):
        st_.extend(x[i : i + chunk])
    assert finalize(st_) == compute_spectrum_batch(x)


def test_stream_one_at_a_time_eight():
    state = StreamState()
    for v in EIGHT:
        assert stream_update(state, v) is state
    assert finalize(state) == compute_spectrum_batch(EIGHT)


def test_stream_hand_trace_three_values():
    state = StreamState()
    for v in [1, 3, 2]:
        state.update(v)
    assert state.completed.tolist() == [1]
    assert state.log_sum.tolist() == [math.log2(3)]
    assert state.partial_max[0] == 2
    # no scale-2 block yet; its partial block holds max(1, 3, 2)
    assert state.partial_max[1] == 3


def test_finalize_two_values_and_non_destructive():
    state = StreamState().extend([4, 9])
    sp = finalize(state)
    assert sp.scale_count == 1 and sp.at(1) == math.log2(9)
    assert finalize(state) == sp
    state.extend([1, 2, 8, 3])
    assert finalize(state) == compute_spectrum_batch([4, 9, 1, 2, 8, 3])
    with pytest.raises(InsufficientDataError):
        finalize(StreamState().extend([2.0]))


def test_power_of_two_top_scale():
    x = frechet_sample(FrechetParams(1.0), make_rng(3), 2 ** 10)
    sp = compute_spectrum_batch(x)
    assert sp.n_at(10) == 1 and sp.at(10) == math.log2(x.max())


def test_long_random_series_bitwise():
    x = frechet_sample(FrechetParams(0.8), make_rng(9), 100_000)
    st_ = StreamState()
    for i in range(0, x.size, 4096):
        st_.extend(x[i : i + 4096])
    a, b = finalize(st_), compute_spectrum_batch(x)
    assert np.array_equal(a.y, b.y) and np.array_equal(a.counts, b.counts)


@given(positive_series)
def test_dyadic_recursion_and_monotonicity(x):
    j = 1
    while x.size // 2 ** (j + 1) >= 1:
        d = block_maxima(x, j)
        up = block_maxima(x, j + 1)
        assert np.array_equal(up, np.maximum(d[0 : 2 * up.size : 2], d[1 : 2 * up.size : 2]))
        assert np.all(up >= d[0 : 2 * up.size : 2]) and np.all(up >= d[1 : 2 * up.size : 2])
        j += 1


@given(st.integers(1, 5000))
def test_state_is_logarithmic(n):
    state = StreamState().extend(np.ones(n))
    assert state.scale_count <= int(math.floor(math.log2(n))) + 1
    # completed counts follow floor(n / 2^j)
    assert state.completed.tolist() == [n // 2 ** j for j in range(1, state.scale_count)]


@given(st.lists(st.floats(0.01, 100), min_size=1, max_size=300))
def test_partial_max_tracks_incomplete_blocks(values):
    state = StreamState().extend(values)
    n = len(values)
    for j, pm in enumerate(state.partial_max, start=1):
        tail = values[(n // 2 ** j) * 2 ** j :]
        assert pm == (max(tail) if tail else None)


def test_state_copy_is_independent():
    a = StreamState().extend([1, 2, 3])
    b = a.copy()
    b.update(10)
    assert a.total_count == 3 and b.total_count == 4
    assert finalize(a) == compute_spectrum_batch([1, 2, 3])


def test_from_values_and_shift():
    sp = MaxSpectrum.from_values([1.0, 2.0, 3.0])
    assert sp.counts.tolist() == [4, 2, 1] and sp.total_count == 8
    assert sp.n_at(0) == 8
    assert np.array_equal(sp.shifted(0.5).y, [1.5, 2.5, 3.5])
    assert sp != sp.shifted(1e-9)
