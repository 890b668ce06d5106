"""How many rollouts are enough: concentration-based sample-size bounds.

Two requirements are combined.  First, the sample mean of the bounded
weights w = exp(-S/temperature) must sit within eps1 of its expectation
with failure probability rho1; a Hoeffding bound gives

    K1 = ceil(-ln(rho1 / 2) / eps1^2).

Second, the weighted control average must sit within eps2 of its
expectation with failure probability rho2.  A Chebyshev bound on the
product w * du, using Var[XY] <= 2 Var[X] Var[Y] + 2 Var[Y] E[X]^2 for
independent X, Y and Var[w] <= E[w] <= 1, gives

    K2 = ceil( Gamma / (rho2 * eps2^2) * (1 / (E1_hat - eps1))^2 ),
    Gamma = sum over control channels of 2 * (Var[du] + E[du]^2),

valid only when eps1 < E1_hat, the estimated mean weight.  The overall
requirement is K = max(K1, K2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class AssumptionViolation(ValueError):
    """The bound's precondition eps1 < E1_hat does not hold."""


def _as_channels(value) -> tuple[float, ...]:
    if np.isscalar(value):
        return (float(value),)
    return tuple(float(v) for v in value)


@dataclass(frozen=True)
class SampleSizeInputs:
    eps1: float
    rho1: float
    eps2: float
    rho2: float
    e1_hat: float
    mean: tuple[float, ...] | float = 0.0   # per-channel E[du]
    var: tuple[float, ...] | float = 1.0    # per-channel Var[du]

    def __post_init__(self):
        if not 0.0 < self.eps1:
            raise ValueError("eps1 must be positive")
        if not 0.0 < self.rho1:
            raise ValueError("rho1 must be positive")
        if self.eps2 <= 0.0 or not 0.0 < self.rho2 < 1.0:
            raise ValueError("eps2 must be positive and rho2 in (0, 1)")
        mean = _as_channels(self.mean)
        var = _as_channels(self.var)
        if len(mean) != len(var):
            raise ValueError("mean and var must have the same number of channels")
        if any(v < 0.0 for v in var):
            raise ValueError("variances must be non-negative")


def k1(eps1: float, rho1: float) -> int:
    """Hoeffding count for the mean weight; 0 when the bound is vacuous."""
    if eps1 <= 0.0 or rho1 <= 0.0:
        raise ValueError("eps1 and rho1 must be positive")
    if rho1 >= 2.0:
        return 0
    return math.ceil(-math.log(rho1 / 2.0) / (eps1 * eps1))


def gamma_bound(mean, var) -> float:
    """Gamma = sum_channels 2 * (Var[du] + E[du]^2)."""
    mean = _as_channels(mean)
    var = _as_channels(var)
    if len(mean) != len(var):
        raise ValueError("mean and var must have the same number of channels")
    return sum(2.0 * (v + m * m) for m, v in zip(mean, var))


def k2(inputs: SampleSizeInputs) -> int:
    """Chebyshev count for the weighted control average."""
    if inputs.eps1 >= inputs.e1_hat:
        raise AssumptionViolation(
            f"needs eps1 < E1_hat, got eps1={inputs.eps1}, E1_hat={inputs.e1_hat}")
    gamma = gamma_bound(inputs.mean, inputs.var)
    if gamma == 0.0:
        return 0
    scale = gamma / (inputs.rho2 * inputs.eps2 * inputs.eps2)
    margin = 1.0 / (inputs.e1_hat - inputs.eps1)
    return math.ceil(scale * margin * margin)


def required_sample_size(inputs: SampleSizeInputs) -> int:
    """Samples needed to satisfy both bounds simultaneously."""
    return max(k1(inputs.eps1, inputs.rho1), k2(inputs))


def estimate_e1(costs, temperature: float) -> float:
    """Sample mean of exp(-S / temperature) over rollout costs."""
    costs = np.asarray(costs, dtype=float)
    if costs.size < 1:
        raise ValueError("need at least one cost")
    if temperature <= 0.0:
        raise ValueError("temperature must be positive")
    return float(np.mean(np.exp(-costs / temperature)))


@dataclass(frozen=True)
class LemmaCheck:
    lhs: float
    rhs: float

    @property
    def satisfied(self) -> bool:
        return self.lhs <= self.rhs


def verify_lemma1(x_support, x_probs, y_support, y_probs,
                  tol: float = 1e-12) -> LemmaCheck:
    """Check Var[XY] <= 2 Var[X] Var[Y] + 2 Var[Y] E[X]^2 + tol.

    X and Y are independent finite discrete variables given by support
    points and probabilities (each summing to 1 within 1e-9).
    """
    xs = np.asarray(x_support, dtype=float)
    px = np.asarray(x_probs, dtype=float)
    ys = np.asarray(y_support, dtype=float)
    py = np.asarray(y_probs, dtype=float)
    for label, (support, probs) in (("x", (xs, px)), ("y", (ys, py))):
        if support.shape != probs.shape or support.ndim != 1 or support.size == 0:
            raise ValueError(f"{label}: support and probs must be equal-length 1D")
        if (probs < 0.0).any() or abs(float(probs.sum()) - 1.0) > 1e-9:
            raise ValueError(f"{label}: probabilities must be >= 0 and sum to 1")

    ex = float(px @ xs)
    ey = float(py @ ys)
    vx = float(px @ (xs - ex) ** 2)
    vy = float(py @ (ys - ey) ** 2)
    # independence: moments of the product come from the product distribution
    exy = ex * ey
    ex2y2 = float(px @ xs**2) * float(py @ ys**2)
    vxy = ex2y2 - exy * exy
    return LemmaCheck(lhs=vxy, rhs=2.0 * vx * vy + 2.0 * vy * ex * ex + tol)


def weight_chain(w, tol: float = 1e-12) -> bool:
    """Population-moment chain for weights in (0, 1]:

    Var[w] <= (1 - E[w]) E[w] <= E[w] <= 1, each link up to tol.
    """
    w = np.asarray(w, dtype=float)
    m = float(w.mean())
    var = float(w.var())  # population variance
    return (var <= (1.0 - m) * m + tol) and ((1.0 - m) * m <= m + tol) and (m <= 1.0 + tol)
