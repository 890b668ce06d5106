"""Counter-based Gaussian stream: addressing, determinism, moments."""

import numpy as np

from rrtmppi.noise import NoiseStream


def test_pair_shape_and_determinism():
    s = NoiseStream(7, "x")
    a = s.pair(3, 5)
    assert a.shape == (2,)
    # a fresh instance with the same coordinates reproduces the draw exactly
    b = NoiseStream(7, "x").pair(3, 5)
    assert np.array_equal(a, b)


def test_block_equals_stacked_pairs():
    s = NoiseStream(11, "mppi/4")
    blk = s.block(5, 37, 4)
    assert blk.shape == (32, 4, 2)
    for i in range(5, 37):
        for j in range(4):
            assert np.array_equal(blk[i - 5, j], s.pair(i, j))


def test_block_split_points_do_not_matter():
    # any partition of the index range concatenates to the same array
    s = NoiseStream(3, "plant")
    whole = s.block(0, 100, 3)
    pieces = np.concatenate([s.block(0, 17, 3), s.block(17, 64, 3),
                             s.block(64, 100, 3)])
    assert np.array_equal(whole, pieces)


def test_distinct_names_and_seeds_decorrelate():
    a = NoiseStream(0, "a").block(0, 64, 1)
    b = NoiseStream(0, "b").block(0, 64, 1)
    c = NoiseStream(1, "a").block(0, 64, 1)
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_moments_standard_normal():
    # 2e6 scalar draws: mean ~ N(0, 1/sqrt(N)), so 5 sigma ~ 3.5e-3
    draws = NoiseStream(123, "lln").block(0, 500_000, 2).ravel()
    assert draws.size == 2_000_000
    assert abs(draws.mean()) < 3.5e-3
    assert abs(draws.var() - 1.0) < 5e-3
    # tail sanity: a standard normal exceeds 4 with p ~ 3e-5
    frac_tail = (np.abs(draws) > 4.0).mean()
    assert 0.0 < frac_tail < 3e-4
