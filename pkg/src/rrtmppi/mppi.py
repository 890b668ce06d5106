"""Path-integral control step: perturbed rollouts, exponential weighting.

Each step draws K control sequences around a mean, simulates them through
the stochastic car model, scores them with a state cost plus an obstacle
indicator penalty, and returns the weight-averaged update

    w_i = exp(-(S_i - min_k S_k) / temperature)
    u_j = sum_i w_i u_{i,j} / sum_i w_i

The min subtraction leaves the average unchanged (weights appear in a
ratio) and keeps the exponentials in range for any cost scale.  Rollouts
whose steering angle reaches the tan singularity are kept but priced at a
flat sentinel cost, which zeroes them out of the average.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import env as env_mod
from .dynamics import Control, DynamicsParams, PHI_LIMIT, State, step
from .env import Environment
from .noise import NoiseStream

SENTINEL_COST = 1.0e9

# Fixed evaluation chunk: results must not depend on the worker count, so
# the decomposition must not either.
_CHUNK = 2048


class DegenerateSampleError(RuntimeError):
    """Every rollout hit the steering singularity; no usable update exists."""


@dataclass
class MppiConfig:
    samples: int = 10000          # K rollouts per step
    horizon: int = 20             # T steps per rollout
    temperature: float = 1.0      # weighting temperature (lambda)
    sigma: tuple[float, float] = (1.0, 1.0)   # per-channel exploration std
    control_penalty: tuple[tuple[float, float], tuple[float, float]] = (
        (0.0, 0.0), (0.0, 0.0))   # quadratic control cost matrix, 0.5*u'Ru
    obstacle_penalty: float = 1000.0
    terminal_weight: float = 1.0
    freeze_obstacle_time: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.samples < 1 or self.horizon < 1:
            raise ValueError("samples and horizon must be at least 1")
        if self.temperature <= 0.0:
            raise ValueError("temperature must be positive")
        if any(s < 0.0 for s in self.sigma):
            raise ValueError("sigma components must be non-negative")


@dataclass
class Rollout:
    controls: np.ndarray        # (T, 2) perturbed controls actually applied
    states: list[State]         # post-step states, length T
    cost: float


@dataclass
class StepDiagnostics:
    min_cost: float
    mean_cost: float
    ess: float                  # effective sample size of the weights
    sentinel_count: int


@dataclass
class StepResult:
    executed: Control           # first element of the updated sequence
    updated: np.ndarray         # (T, 2) weight-averaged control sequence
    next_mean: np.ndarray       # updated shifted left, last element repeated
    costs: np.ndarray           # (K,) rollout costs
    diagnostics: StepDiagnostics


def running_cost(s: State, u: Control, t: float, env: Environment,
                 cfg: MppiConfig) -> float:
    """Squared distance to goal, obstacle indicator, quadratic control term."""
    dx = s.x - env.goal[0]
    dy = s.y - env.goal[1]
    c = dx * dx + dy * dy
    if env_mod.is_in_obstacle((s.x, s.y), t, env):
        c += cfg.obstacle_penalty
    r = cfg.control_penalty
    if any(any(row) for row in r):
        c += 0.5 * (r[0][0] * u.v * u.v + (r[0][1] + r[1][0]) * u.v * u.omega
                    + r[1][1] * u.omega * u.omega)
    return c


def terminal_cost(s: State, t: float, env: Environment, cfg: MppiConfig) -> float:
    """State-only cost of the horizon end, scaled by terminal_weight."""
    dx = s.x - env.goal[0]
    dy = s.y - env.goal[1]
    c = dx * dx + dy * dy
    if env_mod.is_in_obstacle((s.x, s.y), t, env):
        c += cfg.obstacle_penalty
    return cfg.terminal_weight * c


def _step_times(t0: float, cfg: MppiConfig, dyn: DynamicsParams) -> list[float]:
    # Obstacle schedules are queried at the wall-clock time of each simulated
    # state, so rollouts anticipate changes that activate inside the horizon.
    # The freeze flag pins every query to t0 instead.
    if cfg.freeze_obstacle_time:
        return [t0] * cfg.horizon
    return [t0 + (j + 1) * dyn.dt for j in range(cfg.horizon)]


def rollout(initial: State, mean: np.ndarray, stream: NoiseStream, i: int,
            t0: float, env: Environment, cfg: MppiConfig,
            dyn: DynamicsParams) -> Rollout:
    """Simulate one perturbed control sequence.

    A steering-singularity abort keeps the rollout (states frozen from the
    failure on) and prices it at SENTINEL_COST.
    """
    mean = np.asarray(mean, dtype=float)
    sigma = np.asarray(cfg.sigma, dtype=float)
    times = _step_times(t0, cfg, dyn)
    controls = np.empty((cfg.horizon, 2))
    states: list[State] = []
    s = initial
    cost = 0.0
    dead = False
    for j in range(cfg.horizon):
        u = mean[j] + sigma * stream.pair(i, j)
        controls[j] = u
        if not dead:
            if abs(s.phi) >= PHI_LIMIT:
                dead = True
            else:
                s = step(s, Control(float(u[0]), float(u[1])), (0.0, 0.0), dyn)
                cost += running_cost(s, Control(float(u[0]), float(u[1])),
                                     times[j], env, cfg)
        states.append(s)
    if dead:
        return Rollout(controls, states, SENTINEL_COST)
    cost += terminal_cost(s, times[-1], env, cfg)
    return Rollout(controls, states, cost)


def weights(costs: np.ndarray, temperature: float) -> np.ndarray:
    """Exponential weights with the minimum cost subtracted; max is 1."""
    costs = np.asarray(costs, dtype=float)
    if costs.size < 1:
        raise ValueError("need at least one cost")
    return np.exp(-(costs - costs.min()) / temperature)


def update_controls(w: np.ndarray, controls: np.ndarray) -> np.ndarray:
    """Per-step weighted average of rollout controls: (K,), (K,T,2) -> (T,2)."""
    w = np.asarray(w, dtype=float)
    total = w.sum()
    if not total > 0.0:
        raise DegenerateSampleError("all rollout weights vanished")
    return np.einsum("k,ktc->tc", w, np.asarray(controls, dtype=float)) / total


def _propagate_chunk(initial: State, controls: np.ndarray, times: list[float],
                     shapes_per_step: list[list], env: Environment,
                     cfg: MppiConfig, dyn: DynamicsParams) -> np.ndarray:
    """Vectorized rollout costs for one chunk of perturbed control sequences."""
    n = controls.shape[0]
    x = np.full(n, initial.x)
    y = np.full(n, initial.y)
    theta = np.full(n, initial.theta)
    phi = np.full(n, initial.phi)
    cost = np.zeros(n)
    alive = np.ones(n, dtype=bool)
    gx, gy = env.goal
    r = np.asarray(cfg.control_penalty, dtype=float)
    use_r = bool(r.any())

    d2 = occ = None
    for j in range(cfg.horizon):
        dying = alive & (np.abs(phi) >= PHI_LIMIT)
        if dying.any():
            alive = alive & ~dying
        v = controls[:, j, 0]
        w_ = controls[:, j, 1]
        # dead lanes stay frozen; tan input is masked to keep them finite
        tan_phi = np.tan(np.where(alive, phi, 0.0))
        dt = dyn.dt
        x = np.where(alive, x + dt * np.cos(theta) * v, x)
        y = np.where(alive, y + dt * np.sin(theta) * v, y)
        theta = np.where(alive, theta + dt * tan_phi * v / dyn.wheelbase, theta)
        phi = np.where(alive, phi + dt * w_, phi)

        d2 = (x - gx) ** 2 + (y - gy) ** 2
        occ = env_mod.points_in_obstacle(x, y, times[j], env, shapes_per_step[j])
        q = d2 + cfg.obstacle_penalty * occ
        if use_r:
            q = q + 0.5 * (r[0, 0] * v * v + (r[0, 1] + r[1, 0]) * v * w_
                           + r[1, 1] * w_ * w_)
        cost += np.where(alive, q, 0.0)

    cost += np.where(alive, cfg.terminal_weight * (d2 + cfg.obstacle_penalty * occ), 0.0)
    return np.where(alive, cost, SENTINEL_COST)


def mppi_step(initial: State, mean: np.ndarray, t0: float, env: Environment,
              cfg: MppiConfig, dyn: DynamicsParams,
              stream: NoiseStream | None = None, threads: int = 1) -> StepResult:
    """One control update: sample K rollouts around `mean`, weight, average.

    The update is computed in deviation form, mean + avg(w, sigma*eps): this
    is Eq-equivalent to averaging the absolute controls but returns the mean
    bit-for-bit when sigma is zero.  Chunk layout and reductions are fixed,
    so the result is independent of `threads`.
    """
    if stream is None:
        stream = NoiseStream(cfg.seed, "mppi")
    mean = np.asarray(mean, dtype=float)
    if mean.shape != (cfg.horizon, 2):
        raise ValueError(f"mean must have shape ({cfg.horizon}, 2), got {mean.shape}")
    k = cfg.samples
    sigma = np.asarray(cfg.sigma, dtype=float)
    times = _step_times(t0, cfg, dyn)
    shapes_per_step = [env_mod.active_shapes(t, env) for t in times]

    noise = np.empty((k, cfg.horizon, 2))
    costs = np.empty(k)

    spans = [(lo, min(lo + _CHUNK, k)) for lo in range(0, k, _CHUNK)]

    def run_span(span):
        lo, hi = span
        eps = stream.block(lo, hi, cfg.horizon)
        noise[lo:hi] = eps
        costs[lo:hi] = _propagate_chunk(
            initial, mean[None, :, :] + sigma * eps, times, shapes_per_step,
            env, cfg, dyn)

    if threads > 1 and len(spans) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run_span, spans))
    else:
        for span in spans:
            run_span(span)

    sentinel_count = int((costs >= SENTINEL_COST).sum())
    if sentinel_count == k:
        raise DegenerateSampleError("all rollouts hit the steering singularity")

    w = weights(costs, cfg.temperature)
    total = w.sum()
    updated = mean + np.einsum("k,ktc->tc", w, sigma * noise) / total
    next_mean = np.concatenate([updated[1:], updated[-1:]])
    ess = float(total * total / np.square(w).sum())
    diag = StepDiagnostics(
        min_cost=float(costs.min()),
        mean_cost=float(costs.mean()),
        ess=ess,
        sentinel_count=sentinel_count,
    )
    return StepResult(
        executed=Control(float(updated[0, 0]), float(updated[0, 1])),
        updated=updated,
        next_mean=next_mean,
        costs=costs,
        diagnostics=diag,
    )
