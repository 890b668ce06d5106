"""Workspace geometry: bounds, obstacle shapes, and time schedules.

Obstacles are circles or axis-aligned rectangles.  A shape may carry a
schedule of (activation_time, replacement_shape) entries with strictly
increasing times; the shape in effect at time t is the last entry whose
activation time is <= t, falling back to the base shape.  Geometry is
closed: points exactly on an obstacle boundary count as occupied, points
exactly on the workspace boundary count as inside the workspace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_RESOLUTION = 0.1


@dataclass(frozen=True)
class Circle:
    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        if not self.radius > 0.0:
            raise ValueError(f"circle radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle given by min and max corners."""

    lo: tuple[float, float]
    hi: tuple[float, float]

    def __post_init__(self):
        if not (self.lo[0] < self.hi[0] and self.lo[1] < self.hi[1]):
            raise ValueError(f"rect corners must satisfy lo < hi, got {self.lo}, {self.hi}")


Shape = Circle | Rect


def contains(shape: Shape, x, y):
    """Membership test; x, y may be scalars or equal-shape arrays."""
    if isinstance(shape, Circle):
        cx, cy = shape.center
        dx = x - cx
        dy = y - cy
        return dx * dx + dy * dy <= shape.radius * shape.radius
    lo, hi = shape.lo, shape.hi
    return (x >= lo[0]) & (x <= hi[0]) & (y >= lo[1]) & (y <= hi[1])


@dataclass(frozen=True)
class Obstacle:
    shape: Shape
    schedule: tuple[tuple[float, Shape], ...] = ()

    def __post_init__(self):
        times = [t for t, _ in self.schedule]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError(f"schedule times must be strictly increasing, got {times}")

    def shape_at(self, t: float) -> Shape:
        """Shape in effect at time t (piecewise constant, left-closed)."""
        active = self.shape
        for t_act, shape in self.schedule:
            if t_act <= t:
                active = shape
            else:
                break
        return active


@dataclass(frozen=True)
class Environment:
    bounds: Rect
    start: tuple[float, float]
    goal: tuple[float, float]
    obstacles: tuple[Obstacle, ...] = ()

    def __post_init__(self):
        for label, p in (("start", self.start), ("goal", self.goal)):
            if not bool(contains(self.bounds, p[0], p[1])):
                raise ValueError(f"{label} {p} lies outside bounds")


def active_shapes(t: float, env: Environment) -> list[Shape]:
    return [ob.shape_at(t) for ob in env.obstacles]


def is_in_obstacle(p, t: float, env: Environment) -> bool:
    """True if p is outside the workspace or inside any active obstacle."""
    x, y = float(p[0]), float(p[1])
    if not contains(env.bounds, x, y):
        return True
    for shape in active_shapes(t, env):
        if contains(shape, x, y):
            return True
    return False


def points_in_obstacle(x: np.ndarray, y: np.ndarray, t: float, env: Environment,
                       shapes: list[Shape] | None = None) -> np.ndarray:
    """Vectorized twin of is_in_obstacle for coordinate arrays."""
    if shapes is None:
        shapes = active_shapes(t, env)
    occupied = ~contains(env.bounds, x, y)
    for shape in shapes:
        occupied |= contains(shape, x, y)
    return occupied


def _num_intervals(dist: float, resolution: float) -> int:
    # Power-of-two interval count: halving the resolution doubles the count,
    # so the finer sample grid always contains the coarser one.  That keeps
    # segment_free monotone under refinement (a hit can't be "un-found").
    n = 1
    while dist > n * resolution:
        n *= 2
    return n


def segment_free(a, b, t: float, env: Environment,
                 resolution: float = DEFAULT_RESOLUTION) -> bool:
    """Collision check of segment a-b at time t by uniform point sampling.

    Both endpoints are always among the samples; interior samples are spaced
    at most `resolution` apart.
    """
    if resolution <= 0.0:
        raise ValueError(f"resolution must be positive, got {resolution}")
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    if (bx, by) < (ax, ay):
        # canonical endpoint order makes the check exactly symmetric
        ax, ay, bx, by = bx, by, ax, ay
    dist = math.hypot(bx - ax, by - ay)
    if dist == 0.0:
        return not is_in_obstacle((ax, ay), t, env)
    n = _num_intervals(dist, resolution)
    frac = np.arange(n + 1) / n
    xs = ax + frac * (bx - ax)
    ys = ay + frac * (by - ay)
    return not bool(points_in_obstacle(xs, ys, t, env).any())
