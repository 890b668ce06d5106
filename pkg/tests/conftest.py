"""Shared scene and config builders.

Unit tests run on deliberately tiny sample counts and short horizons; the
full-scale batteries live in test_acceptance.py.
"""

from rrtmppi.dynamics import DynamicsParams
from rrtmppi.env import Circle, Environment, Obstacle, Rect
from rrtmppi.mppi import MppiConfig
from rrtmppi.nominal import NominalGains
from rrtmppi.planner import PlannerConfig
from rrtmppi.rrt import RrtConfig


def open_env(start=(2.0, 2.0), goal=(18.0, 18.0)):
    """20x20 obstacle-free box."""
    return Environment(bounds=Rect((0.0, 0.0), (20.0, 20.0)),
                       start=start, goal=goal, obstacles=())


def blocked_env():
    """One circle squarely between start and goal."""
    return Environment(bounds=Rect((0.0, 0.0), (20.0, 20.0)),
                       start=(2.0, 2.0), goal=(18.0, 18.0),
                       obstacles=(Obstacle(Circle((10.0, 10.0), 3.0)),))


def tiny_mppi(**over):
    base = dict(samples=32, horizon=6, temperature=1.0, sigma=(1.0, 1.0),
                obstacle_penalty=1000.0, seed=0)
    base.update(over)
    return MppiConfig(**base)


def tiny_planner(**over):
    base = dict(replan_radius=6.0, goal_tolerance=1.0, max_wall_steps=40,
                rrt=RrtConfig(gamma=0.5, max_iters=20000, goal_bias=0.05,
                              resolution=0.1, seed=0),
                mppi=tiny_mppi(),
                gains=NominalGains(v_max=2.0, alpha=1.0, k_p=1.0, lookahead=8))
    base.update(over)
    return PlannerConfig(**base)


def dyn_params(**over):
    base = dict(wheelbase=0.5, dt=0.05, noise_scale=(1.0, 1.0))
    base.update(over)
    return DynamicsParams(**base)
