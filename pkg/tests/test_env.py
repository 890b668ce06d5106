"""Workspace model: closed shapes, schedules, occupancy, edge checking."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rrtmppi.env import (Circle, Environment, Obstacle, Rect, active_shapes,
                         contains, is_in_obstacle, points_in_obstacle,
                         segment_free)


# ---------------------------------------------------------------- shapes

def test_shapes_are_closed_sets():
    c = Circle((0.0, 0.0), 1.0)
    assert contains(c, 1.0, 0.0)            # rim belongs to the shape
    assert not contains(c, 1.0 + 1e-9, 0.0)
    r = Rect((0.0, 0.0), (2.0, 1.0))
    assert contains(r, 0.0, 0.0) and contains(r, 2.0, 1.0)
    assert not contains(r, 2.0 + 1e-9, 1.0)


def test_shape_validation():
    with pytest.raises(ValueError):
        Circle((0.0, 0.0), 0.0)
    with pytest.raises(ValueError):
        Rect((1.0, 0.0), (1.0, 2.0))        # zero width


def test_contains_vectorized_matches_scalar():
    rng = np.random.default_rng(0)
    x = rng.uniform(-3, 3, 500)
    y = rng.uniform(-3, 3, 500)
    for shape in (Circle((0.5, -0.5), 1.5), Rect((-1.0, -2.0), (2.0, 1.0))):
        vec = contains(shape, x, y)
        for k in range(x.size):
            assert bool(vec[k]) == bool(contains(shape, float(x[k]), float(y[k])))


# ------------------------------------------------------------- schedules

def test_schedule_is_piecewise_constant_left_closed():
    grown = Circle((5.0, 5.0), 3.0)
    ob = Obstacle(Circle((5.0, 5.0), 1.0), schedule=((1.0, grown),))
    assert ob.shape_at(0.0).radius == 1.0
    assert ob.shape_at(1.0 - 1e-12).radius == 1.0
    assert ob.shape_at(1.0).radius == 3.0   # activation instant included
    assert ob.shape_at(99.0).radius == 3.0


def test_schedule_picks_latest_activated_entry():
    a, b = Circle((0, 0), 2.0), Circle((9, 9), 0.5)
    ob = Obstacle(Circle((0, 0), 1.0), schedule=((1.0, a), (2.0, b)))
    assert ob.shape_at(1.5) is a
    assert ob.shape_at(2.0) is b


def test_schedule_times_must_strictly_increase():
    c = Circle((0, 0), 1.0)
    with pytest.raises(ValueError):
        Obstacle(c, schedule=((1.0, c), (1.0, c)))
    with pytest.raises(ValueError):
        Obstacle(c, schedule=((2.0, c), (1.0, c)))


# ------------------------------------------------------------- occupancy

def _scene():
    return Environment(
        bounds=Rect((0.0, 0.0), (10.0, 10.0)), start=(1.0, 1.0),
        goal=(9.0, 9.0),
        obstacles=(Obstacle(Circle((5.0, 5.0), 1.0),
                            schedule=((1.0, Circle((5.0, 5.0), 2.0)),)),
                   Obstacle(Rect((7.0, 0.0), (8.0, 3.0)))))


def test_out_of_bounds_counts_as_occupied():
    env = _scene()
    assert is_in_obstacle((-0.1, 5.0), 0.0, env)
    assert is_in_obstacle((5.0, 10.1), 0.0, env)
    assert not is_in_obstacle((1.0, 1.0), 0.0, env)


def test_occupancy_follows_the_schedule():
    env = _scene()
    p = (5.0, 6.5)                           # between radius 1 and radius 2
    assert not is_in_obstacle(p, 0.0, env)
    assert is_in_obstacle(p, 1.0, env)


def test_points_in_obstacle_matches_scalar_loop():
    env = _scene()
    rng = np.random.default_rng(1)
    x = rng.uniform(-1, 11, 400)
    y = rng.uniform(-1, 11, 400)
    for t in (0.0, 1.0):
        vec = points_in_obstacle(x, y, t, env)
        ref = [is_in_obstacle((float(a), float(b)), t, env) for a, b in zip(x, y)]
        assert vec.tolist() == ref


def test_points_in_obstacle_accepts_precomputed_shapes():
    env = _scene()
    x = np.array([5.0, 1.0])
    y = np.array([6.5, 1.0])
    shapes = active_shapes(1.0, env)
    assert np.array_equal(points_in_obstacle(x, y, 1.0, env, shapes),
                          points_in_obstacle(x, y, 1.0, env))


def test_environment_endpoint_validation():
    with pytest.raises(ValueError):
        Environment(bounds=Rect((0, 0), (10, 10)), start=(-1.0, 1.0),
                    goal=(9.0, 9.0))
    with pytest.raises(ValueError):
        Environment(bounds=Rect((0, 0), (10, 10)), start=(1.0, 1.0),
                    goal=(9.0, 11.0))


# ----------------------------------------------------------- edge checks

def test_segment_free_obvious_cases():
    env = _scene()
    # straight through the circle's center
    assert not segment_free((3.0, 5.0), (7.0, 5.0), 0.0, env)
    # clearly above everything
    assert segment_free((1.0, 9.0), (9.0, 9.0), 0.0, env)
    # endpoint inside an obstacle is itself a hit
    assert not segment_free((7.5, 1.0), (6.0, 5.0), 0.0, env)
    # leaving the workspace is a hit
    assert not segment_free((9.0, 9.0), (11.0, 9.0), 0.0, env)


def test_segment_free_sees_scheduled_growth():
    env = _scene()
    seg = ((5.0, 6.5), (6.8, 6.5))           # grazes only the grown circle
    assert segment_free(*seg, 0.0, env)
    assert not segment_free(*seg, 1.0, env)


@given(st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_segment_free_is_symmetric(n):
    env = _scene()
    rng = np.random.default_rng(n)
    a = tuple(rng.uniform(0, 10, 2))
    b = tuple(rng.uniform(0, 10, 2))
    assert segment_free(a, b, 0.0, env) == segment_free(b, a, 0.0, env)


@given(st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_segment_free_refinement_keeps_hits(n):
    # halving the resolution nests the sample grid, so a hit cannot vanish
    env = _scene()
    rng = np.random.default_rng(n)
    a = tuple(rng.uniform(0, 10, 2))
    b = tuple(rng.uniform(0, 10, 2))
    if not segment_free(a, b, 0.0, env, resolution=0.4):
        assert not segment_free(a, b, 0.0, env, resolution=0.2)
        assert not segment_free(a, b, 0.0, env, resolution=0.1)
