import numpy as np

from maxtail.rng import child_seed, fresh_seed, make_rng


def test_same_key_same_stream():
    assert np.array_equal(make_rng(5, 1, 2).random(10), make_rng(5, 1, 2).random(10))


def test_different_keys_differ():
    a = make_rng(5, 1).random(10)
    assert not np.array_equal(a, make_rng(5, 2).random(10))
    assert not np.array_equal(a, make_rng(6, 1).random(10))


def test_child_of_sequence_extends_path():
    parent = child_seed(9, 3)
    assert np.array_equal(
        np.random.Generator(np.random.PCG64(child_seed(parent, 4))).random(5),
        make_rng(9, 3, 4).random(5),
    )


def test_fresh_seed_range():
    s = fresh_seed()
    assert 0 <= s < 2 ** 63
