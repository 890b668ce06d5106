"""Noisy kinematic car model (unicycle with a steering angle).

State is (x, y, theta, phi): planar position, heading, and front-wheel
steering angle.  Controls are (v, omega): forward speed and steering rate.
One Euler step of length dt:

    x'     = x     + dt * cos(theta) * (v + dv)
    y'     = y     + dt * sin(theta) * (v + dv)
    theta' = theta + dt * tan(phi) * (v + dv) / wheelbase
    phi'   = phi   + dt * (omega + dw)

where (dv, dw) is an additive Gaussian control perturbation.  All noise
enters through the controls; the geometry update itself is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .noise import NoiseStream

# Steering angles this close to +-pi/2 put tan(phi) out of any usable range;
# step() refuses to integrate them.
PHI_MARGIN = 1e-6
PHI_LIMIT = math.pi / 2 - PHI_MARGIN


class SteeringLimitError(RuntimeError):
    """Raised when |phi| reaches the tan singularity at pi/2."""


@dataclass(frozen=True)
class State:
    x: float
    y: float
    theta: float
    phi: float

    def position(self) -> np.ndarray:
        return np.array([self.x, self.y])

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.theta, self.phi])


@dataclass(frozen=True)
class Control:
    v: float
    omega: float

    def as_array(self) -> np.ndarray:
        return np.array([self.v, self.omega])


@dataclass(frozen=True)
class DynamicsParams:
    wheelbase: float = 0.5
    dt: float = 0.05
    noise_scale: tuple[float, float] = (1.0, 1.0)

    def __post_init__(self):
        if self.wheelbase <= 0.0 or self.dt <= 0.0:
            raise ValueError("wheelbase and dt must be positive")
        if any(s < 0.0 for s in self.noise_scale):
            raise ValueError("noise_scale components must be non-negative")


ZERO_PERTURBATION = (0.0, 0.0)


def step(s: State, u: Control, delta, p: DynamicsParams) -> State:
    """Advance one Euler step; delta is the (dv, dw) control perturbation."""
    if abs(s.phi) >= PHI_LIMIT:
        raise SteeringLimitError(f"steering angle {s.phi} at tan singularity")
    v = u.v + delta[0]
    w = u.omega + delta[1]
    return State(
        s.x + p.dt * math.cos(s.theta) * v,
        s.y + p.dt * math.sin(s.theta) * v,
        s.theta + p.dt * math.tan(s.phi) * v / p.wheelbase,
        s.phi + p.dt * w,
    )


def sample_perturbation(stream: NoiseStream, i: int, j: int,
                        p: DynamicsParams) -> np.ndarray:
    """Perturbation for rollout i, horizon step j: noise_scale * N(0, I)."""
    return np.asarray(p.noise_scale, dtype=float) * stream.pair(i, j)
