"""Tracking law: saturating speed, proportional heading, target selection."""

import math

import numpy as np
import pytest

from rrtmppi.dynamics import State
from rrtmppi.nominal import (NominalGains, TrackingRef, nominal_control,
                             select_target, wrap_angle)
from rrtmppi.rrt import Path


def test_wrap_angle_table():
    assert wrap_angle(0.0) == 0.0
    assert wrap_angle(math.pi) == math.pi            # half-open on the left
    assert wrap_angle(-math.pi) == math.pi
    assert wrap_angle(3 * math.pi / 2) == pytest.approx(-math.pi / 2, abs=1e-12)
    assert wrap_angle(-3 * math.pi / 2) == pytest.approx(math.pi / 2, abs=1e-12)
    assert wrap_angle(2 * math.pi) == pytest.approx(0.0, abs=1e-12)
    assert wrap_angle(5 * math.pi) == pytest.approx(math.pi, abs=1e-12)


def test_speed_saturates_with_distance():
    g = NominalGains(v_max=2.0, alpha=1.0, k_p=1.0, lookahead=1)
    # unit distance: v = v_max (1 - e^{-1})
    u = nominal_control(State(0, 0, 0, 0), (1.0, 0.0), g)
    assert u.v == pytest.approx(2.0 * (1.0 - math.exp(-1.0)), rel=1e-15)
    assert u.omega == 0.0
    # at the target the commanded speed vanishes
    u0 = nominal_control(State(1.0, 0.0, 0.3, 0), (1.0, 0.0), g)
    assert u0.v == 0.0
    # far away the speed approaches v_max
    far = nominal_control(State(0, 0, 0, 0), (100.0, 0.0), g)
    assert far.v == pytest.approx(2.0, abs=1e-9)


def test_heading_error_is_proportional_and_wrapped():
    g = NominalGains(v_max=2.0, alpha=1.0, k_p=1.5, lookahead=1)
    left = nominal_control(State(0, 0, 0.0, 0), (0.0, 1.0), g)
    assert left.omega == pytest.approx(1.5 * math.pi / 2, rel=1e-12)
    # a target just clockwise of the heading wraps to a small negative turn
    wrapped = nominal_control(State(0, 0, 3.0, 0), (1.0, -0.5), g)
    want = 1.5 * wrap_angle(math.atan2(-0.5, 1.0) - 3.0)
    assert wrapped.omega == pytest.approx(want, rel=1e-12)
    assert abs(wrapped.omega) <= 1.5 * math.pi


def test_gain_validation():
    with pytest.raises(ValueError):
        NominalGains(v_max=-1.0)
    with pytest.raises(ValueError):
        NominalGains(lookahead=-1)


def test_select_target_picks_nearest_plus_lookahead():
    path = Path(np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]]))
    g = NominalGains(v_max=2.0, alpha=1.0, k_p=1.0, lookahead=2)
    ref = select_target(path, State(1.2, 0.3, 0, 0), g)
    assert isinstance(ref, TrackingRef)
    assert ref.nearest == 1
    assert ref.target == 3
    assert np.array_equal(ref.point, np.array([3.0, 0.0]))
    assert ref.deviation == pytest.approx(math.sqrt(0.2 ** 2 + 0.3 ** 2), rel=1e-12)


def test_select_target_clamps_at_path_end():
    path = Path(np.array([[0.0, 0.0], [1.0, 0.0]]))
    g = NominalGains(lookahead=5)
    ref = select_target(path, State(1.1, 0.0, 0, 0), g)
    assert ref.nearest == 1
    assert ref.target == 1


def test_select_target_nearest_is_global_argmin():
    # a path that curls back: nearest must be the true argmin, not the first
    path = Path(np.array([[0.0, 0.0], [2.0, 0.0], [4.0, 0.0], [4.0, 2.0],
                          [2.0, 2.0], [0.5, 2.0]]))
    g = NominalGains(lookahead=1)
    ref = select_target(path, State(0.4, 1.8, 0, 0), g)
    assert ref.nearest == 5
