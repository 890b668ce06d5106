"""Waypoint-tracking control law used to center the sampling distribution.

Speed saturates smoothly with squared distance to the target waypoint and
vanishes at zero error; steering rate is proportional to the wrapped heading
error.  The law is only a rough tracker: its job is to give the stochastic
optimizer a sensible mean, not to be a good controller on its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dynamics import Control, State
from .rrt import Path


@dataclass(frozen=True)
class NominalGains:
    v_max: float = 2.0
    alpha: float = 0.5
    k_p: float = 2.0
    lookahead: int = 1

    def __post_init__(self):
        if self.v_max < 0.0 or self.alpha < 0.0 or self.lookahead < 0:
            raise ValueError("gains must be non-negative")


def wrap_angle(a: float) -> float:
    """Wrap to (-pi, pi]."""
    w = (a + math.pi) % (2.0 * math.pi) - math.pi
    return math.pi if w == -math.pi else w


def nominal_control(s: State, target, gains: NominalGains) -> Control:
    """Control toward a 2D target point.

    v = v_max * (1 - exp(-alpha * e_d^2)) rises monotonically from exactly
    zero at the target; omega = k_p * e_theta with the heading error wrapped
    to (-pi, pi].
    """
    dx = float(target[0]) - s.x
    dy = float(target[1]) - s.y
    e_d2 = dx * dx + dy * dy
    v = gains.v_max * (1.0 - math.exp(-gains.alpha * e_d2))
    e_theta = wrap_angle(math.atan2(dy, dx) - s.theta)
    return Control(v, gains.k_p * e_theta)


class TrackingRef(NamedTuple):
    nearest: int        # index of the closest waypoint
    target: int         # lookahead index, clamped to the last waypoint
    point: np.ndarray   # waypoints[target]
    deviation: float    # distance from the state to waypoints[nearest]


def select_target(path: Path, s: State, gains: NominalGains) -> TrackingRef:
    """Closest waypoint plus lookahead; deviation is to the closest one."""
    wp = path.waypoints
    d2 = (wp[:, 0] - s.x) ** 2 + (wp[:, 1] - s.y) ** 2
    nearest = int(np.argmin(d2))
    target = min(nearest + gains.lookahead, len(wp) - 1)
    return TrackingRef(nearest, target, wp[target], math.sqrt(float(d2[nearest])))
