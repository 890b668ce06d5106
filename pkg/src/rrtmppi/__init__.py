"""Sampling-based motion planning on a noisy kinematic car.

The package combines a rapidly-exploring random tree planner (with a
replanning variant that reconnects to a prior path), a path-integral
control step guided by a waypoint-tracking mean, concentration-based
sample-size bounds, and a benchmark harness with scenario files, CSV
logs, and SVG rendering.
"""

from .dynamics import (Control, DynamicsParams, State, SteeringLimitError,
                       sample_perturbation, step)
from .env import (Circle, Environment, Obstacle, Rect, active_shapes,
                  is_in_obstacle, segment_free)
from .mppi import (DegenerateSampleError, MppiConfig, Rollout, mppi_step,
                   rollout, running_cost, update_controls, weights)
from .noise import NoiseStream
from .nominal import NominalGains, nominal_control, select_target, wrap_angle
from .planner import (PlannerConfig, ReplanEvent, RunRecord, StepRecord,
                      replan_trigger, run)
from .rrt import (Path, RrtConfig, StartInCollisionError, Tree,
                  nearest_neighbor, plan, replan, sample_state, steer)
from .sample_size import (AssumptionViolation, SampleSizeInputs, estimate_e1,
                          gamma_bound, k1, k2, required_sample_size,
                          verify_lemma1, weight_chain)
from .scenario import Scenario, ScenarioError, load_scenario, save_scenario

__version__ = "0.1.0"

__all__ = [
    "Circle", "Control", "DegenerateSampleError", "DynamicsParams",
    "Environment", "MppiConfig", "NoiseStream", "NominalGains", "Obstacle",
    "Path", "PlannerConfig", "Rect", "ReplanEvent", "Rollout", "RrtConfig",
    "RunRecord", "SampleSizeInputs", "Scenario", "ScenarioError",
    "StartInCollisionError", "State", "StepRecord", "SteeringLimitError",
    "AssumptionViolation", "Tree", "active_shapes", "estimate_e1",
    "gamma_bound", "is_in_obstacle", "k1", "k2", "load_scenario",
    "mppi_step", "nearest_neighbor", "nominal_control", "plan", "replan",
    "replan_trigger", "required_sample_size", "rollout", "run",
    "running_cost", "sample_perturbation", "sample_state", "save_scenario",
    "segment_free", "select_target", "steer", "step", "update_controls",
    "verify_lemma1", "weight_chain", "weights", "wrap_angle",
]
