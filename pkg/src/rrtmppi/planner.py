"""Closed-loop navigation: offline tree plan, tracked by sampled control.

The executed loop per wall step: measure deviation from the active waypoint
path, replan from the current position when it reaches the replan radius,
rebuild the horizon mean by simulating the tracking law, take one sampled
control update, then advance the plant with an independent noise draw.
The plant and every rollout draw from counter-addressed streams derived
from the run seed, so a run is reproducible regardless of worker threads.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import rrt as rrt_mod
from .dynamics import (Control, DynamicsParams, PHI_LIMIT, State,
                       SteeringLimitError, step)
from .env import Environment, is_in_obstacle
from .mppi import DegenerateSampleError, MppiConfig, mppi_step
from .noise import NoiseStream
from .nominal import NominalGains, nominal_control, select_target
from .rrt import Path, RrtConfig

# outcome literals
REACHED = "reached-goal"
COLLIDED = "collided"
EXHAUSTED = "budget-exhausted"
PLAN_FAILED = "plan-failed"

# child-stream tags for the run seed
_OFFLINE_TAG = 3101
_REPLAN_TAG = 3201


class SpliceError(RuntimeError):
    """A replan result could not be joined back onto the nominal path."""


@dataclass
class PlannerConfig:
    replan_radius: float = 6.0
    goal_tolerance: float = 1.0
    max_wall_steps: int = 600
    rrt: RrtConfig = field(default_factory=RrtConfig)
    mppi: MppiConfig = field(default_factory=MppiConfig)
    gains: NominalGains = field(default_factory=NominalGains)


@dataclass
class StepRecord:
    step: int
    t: float                    # wall time of `state` (post-step)
    state: State
    control: Control            # executed control
    perturbation: tuple[float, float]   # plant noise, logged for replay
    deviation: float            # measured at decision time; nan in fixed mode
    replanned: bool
    min_rollout_cost: float
    ess: float
    collided: bool


@dataclass
class ReplanEvent:
    step: int
    t: float
    deviation: float
    success: bool
    path: Path | None           # spliced active path after the event


@dataclass
class ProbeRecord:
    step: int
    costs: np.ndarray           # (K,) rollout costs at the probed step
    mean: np.ndarray            # (T, 2) horizon mean at the probed step


@dataclass
class RunRecord:
    mode: str
    seed: int
    outcome: str                # reached-goal | collided | budget-exhausted | plan-failed
    start_state: State
    steps: list[StepRecord]
    offline_path: Path | None
    final_path: Path | None
    replans: list[ReplanEvent]
    timings: dict[str, float]   # per-phase wall milliseconds
    steering_fault: bool = False
    probe: ProbeRecord | None = None

    def collision_steps(self) -> int:
        return sum(1 for s in self.steps if s.collided)

    def final_state(self) -> State:
        return self.steps[-1].state if self.steps else self.start_state


def parse_mode(mode: str) -> tuple[str, np.ndarray | None]:
    """'rrt-mppi' or 'fixed:v,w' -> (kind, fixed mean or None)."""
    if mode == "rrt-mppi":
        return "rrt-mppi", None
    if mode.startswith("fixed:"):
        parts = mode[len("fixed:"):].split(",")
        if len(parts) != 2:
            raise ValueError(f"fixed mode needs 'fixed:v,omega', got {mode!r}")
        return "fixed", np.array([float(parts[0]), float(parts[1])])
    raise ValueError(f"unknown mode {mode!r}")


def replan_trigger(deviation: float, radius: float) -> bool:
    """Replan exactly when the deviation has reached the radius."""
    return deviation >= radius


def reference_blocked(path: Path, ref, t: float, env: Environment) -> bool:
    """True when the tracked reference has been swallowed by an obstacle.

    Deviation alone cannot detect a path segment that an obstacle grew over
    while the vehicle is still approaching it; without this check the vehicle
    would press into the blockage at near-zero deviation and never recover.
    """
    wp = path.waypoints
    return (is_in_obstacle(wp[ref.nearest], t, env)
            or is_in_obstacle(wp[ref.target], t, env))


def horizon_mean(path: Path, state: State, gains: NominalGains,
                 cfg: MppiConfig, dyn: DynamicsParams) -> np.ndarray:
    """Mean control sequence: the tracking law simulated noise-free ahead.

    If the predicted vehicle reaches the steering stop, the rest of the
    sequence is zeroed: nothing sensible can be predicted past the model
    singularity, and a stop keeps the sampled rollouts centered somewhere
    survivable instead of dragging them all over the limit.
    """
    mean = np.zeros((cfg.horizon, 2))
    sim = state
    for j in range(cfg.horizon):
        if abs(sim.phi) >= PHI_LIMIT:
            break
        ref = select_target(path, sim, gains)
        u = nominal_control(sim, ref.point, gains)
        mean[j, 0] = u.v
        mean[j, 1] = u.omega
        sim = step(sim, u, (0.0, 0.0), dyn)
    return mean


def splice(new_path: Path, active: Path, goal) -> Path:
    """Join a replan result onto the path it branched from.

    A replan ends either at the goal (nothing to join) or exactly at one of
    the active path's waypoints; the original suffix continues from there.
    """
    end = new_path.waypoints[-1]
    if np.array_equal(end, np.asarray(goal, dtype=float)):
        return new_path
    matches = np.where((active.waypoints == end).all(axis=1))[0]
    if len(matches) == 0:
        raise SpliceError("replan endpoint is not a waypoint of the active path")
    j = int(matches[0])
    return Path(np.vstack([new_path.waypoints, active.waypoints[j + 1:]]))


def run(env: Environment, cfg: PlannerConfig, mode: str = "rrt-mppi",
        dyn: DynamicsParams | None = None, seed: int = 0,
        start: State | tuple | None = None, threads: int = 1,
        probe_step: int | None = None) -> RunRecord:
    """Execute one navigation run; see the module docstring for the loop.

    `start` may be a State, an (x, y) or (x, y, theta, phi) tuple, or None
    for the environment's start with zero heading and steering.
    """
    if dyn is None:
        dyn = DynamicsParams()
    if start is None:
        start = State(float(env.start[0]), float(env.start[1]), 0.0, 0.0)
    elif not isinstance(start, State):
        pose = tuple(float(v) for v in start)
        if len(pose) == 2:
            pose = pose + (0.0, 0.0)
        if len(pose) != 4:
            raise ValueError(f"start needs 2 or 4 components, got {len(pose)}")
        start = State(*pose)
    kind, fixed_mean = parse_mode(mode)
    goal = np.asarray(env.goal, dtype=float)

    timings = {"offline_ms": 0.0, "mppi_ms": 0.0, "replan_ms": 0.0, "total_ms": 0.0}
    t_run0 = time.perf_counter()

    offline: Path | None = None
    if kind == "rrt-mppi":
        t0 = time.perf_counter()
        offline = rrt_mod.plan(env, cfg.rrt, t=0.0,
                               rng=np.random.default_rng((seed, _OFFLINE_TAG)))
        timings["offline_ms"] = (time.perf_counter() - t0) * 1e3
        if offline is None:
            timings["total_ms"] = (time.perf_counter() - t_run0) * 1e3
            return RunRecord(mode, seed, PLAN_FAILED, start, [], None, None,
                             [], timings)

    active = offline
    plant = NoiseStream(seed, "plant")
    noise_scale = np.asarray(dyn.noise_scale, dtype=float)
    state = start
    steps: list[StepRecord] = []
    replans: list[ReplanEvent] = []
    probe: ProbeRecord | None = None
    fault = False
    outcome = EXHAUSTED

    for n in range(cfg.max_wall_steps):
        t = n * dyn.dt
        if math.hypot(state.x - goal[0], state.y - goal[1]) <= cfg.goal_tolerance:
            outcome = REACHED
            break

        deviation = math.nan
        replanned = False
        if kind == "rrt-mppi":
            ref = select_target(active, state, cfg.gains)
            deviation = ref.deviation
            if (replan_trigger(deviation, cfg.replan_radius)
                    or reference_blocked(active, ref, t, env)):
                replanned = True
                t0 = time.perf_counter()
                # Reconnect only to the part of the path still ahead and still
                # valid: junctions behind the progress point would send the
                # vehicle backwards, and junctions before a swallowed section
                # would leave the repaired path running through the obstacle.
                ahead = active.waypoints[ref.nearest:]
                blocked = [i for i, wp in enumerate(ahead)
                           if is_in_obstacle(wp, t, env)]
                if blocked and blocked[-1] + 1 < len(ahead):
                    ahead = ahead[blocked[-1] + 1:]
                remaining = Path(ahead)
                new_path = rrt_mod.replan(
                    remaining, state.position(), env, cfg.rrt, t,
                    rng=np.random.default_rng((seed, _REPLAN_TAG, len(replans))))
                timings["replan_ms"] += (time.perf_counter() - t0) * 1e3
                if new_path is None:
                    # keep tracking the stale path; the event is still logged
                    replans.append(ReplanEvent(n, t, deviation, False, None))
                else:
                    active = splice(new_path, active, goal)
                    replans.append(ReplanEvent(n, t, deviation, True, active))
            mean = horizon_mean(active, state, cfg.gains, cfg.mppi, dyn)
        else:
            mean = np.tile(fixed_mean, (cfg.mppi.horizon, 1))

        t0 = time.perf_counter()
        try:
            result = mppi_step(state, mean, t, env, cfg.mppi, dyn,
                               stream=NoiseStream(seed, f"mppi/{n}"),
                               threads=threads)
        except DegenerateSampleError:
            # no survivable control exists from here; score it as a crash
            timings["mppi_ms"] += (time.perf_counter() - t0) * 1e3
            fault = True
            outcome = COLLIDED
            break
        timings["mppi_ms"] += (time.perf_counter() - t0) * 1e3
        if probe_step == n:
            probe = ProbeRecord(n, result.costs.copy(), mean.copy())

        delta = noise_scale * plant.pair(n, 0)
        try:
            state = step(state, result.executed, delta, dyn)
        except SteeringLimitError:
            # vehicle left its controllable envelope; score it as a crash
            fault = True
            outcome = COLLIDED
            break
        t_next = (n + 1) * dyn.dt
        hit = is_in_obstacle((state.x, state.y), t_next, env)
        steps.append(StepRecord(n, t_next, state, result.executed,
                                (float(delta[0]), float(delta[1])), deviation,
                                replanned, result.diagnostics.min_cost,
                                result.diagnostics.ess, hit))
        if hit:
            outcome = COLLIDED
            break
    else:
        # budget spent; the last step may still have landed on the goal
        if math.hypot(state.x - goal[0], state.y - goal[1]) <= cfg.goal_tolerance:
            outcome = REACHED

    timings["total_ms"] = (time.perf_counter() - t_run0) * 1e3
    return RunRecord(mode, seed, outcome, start, steps, offline, active,
                     replans, timings, steering_fault=fault, probe=probe)


def replay_states(record: RunRecord, dyn: DynamicsParams) -> list[State]:
    """Re-chain the logged controls and perturbations through the dynamics.

    The result must equal the logged states exactly; tests use this to pin
    the record's replayability.
    """
    out = []
    state = record.start_state
    for rec in record.steps:
        state = step(state, rec.control, rec.perturbation, dyn)
        out.append(state)
    return out
