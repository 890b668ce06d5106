"""Scenario files: everything one benchmark run needs, as one JSON object.

The schema is strict: unknown keys are rejected with their JSON path, every
section beyond bounds/start/goal is optional and falls back to the library
defaults, and any field can be overridden from the process environment with
variables named RRTMPPI_<PATH> (path components upper-cased and joined by
underscores; values are parsed as JSON, bare strings pass through).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, asdict
from importlib import resources
from pathlib import Path as FsPath

from .dynamics import DynamicsParams, State
from .env import Circle, Environment, Obstacle, Rect, Shape
from .mppi import MppiConfig
from .nominal import NominalGains
from .planner import PlannerConfig
from .rrt import RrtConfig

SCHEMA_VERSION = 1
ENV_PREFIX = "RRTMPPI"


class ScenarioError(ValueError):
    """Malformed scenario content; message carries the JSON path."""


@dataclass
class Scenario:
    env: Environment
    start: State
    dynamics: DynamicsParams = field(default_factory=DynamicsParams)
    planner: PlannerConfig = field(default_factory=PlannerConfig)
    modes: list[str] = field(default_factory=lambda: ["rrt-mppi"])
    seeds: list[int] = field(default_factory=lambda: [0])
    output_dir: str | None = None


# ---------------------------------------------------------------------------
# validation helpers

def _want(node, path, kind, kind_name):
    if not isinstance(node, kind) or isinstance(node, bool):
        raise ScenarioError(f"{path}: expected {kind_name}, got {node!r}")
    return node


def _number(node, path):
    return float(_want(node, path, (int, float), "a number"))


def _integer(node, path):
    if not isinstance(node, int) or isinstance(node, bool):
        raise ScenarioError(f"{path}: expected an integer, got {node!r}")
    return node


def _boolean(node, path):
    if not isinstance(node, bool):
        raise ScenarioError(f"{path}: expected a boolean, got {node!r}")
    return node


def _point(node, path):
    seq = _want(node, path, list, "a [x, y] pair")
    if len(seq) != 2:
        raise ScenarioError(f"{path}: expected 2 numbers, got {len(seq)}")
    return tuple(_number(v, f"{path}[{i}]") for i, v in enumerate(seq))


def _obj(node, path, allowed: set[str]) -> dict:
    d = _want(node, path, dict, "an object")
    unknown = set(d) - allowed
    if unknown:
        raise ScenarioError(f"{path}: unknown field(s) {sorted(unknown)}")
    return d


def _shape(node, path) -> Shape:
    d = _obj(node, path, {"kind", "center", "radius", "lo", "hi"})
    kind = d.get("kind")
    try:
        if kind == "circle":
            extra = set(d) - {"kind", "center", "radius"}
            if extra:
                raise ScenarioError(f"{path}: circle does not take {sorted(extra)}")
            return Circle(_point(d.get("center"), f"{path}.center"),
                          _number(d.get("radius"), f"{path}.radius"))
        if kind == "rect":
            extra = set(d) - {"kind", "lo", "hi"}
            if extra:
                raise ScenarioError(f"{path}: rect does not take {sorted(extra)}")
            return Rect(_point(d.get("lo"), f"{path}.lo"),
                        _point(d.get("hi"), f"{path}.hi"))
    except ValueError as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(f"{path}: {exc}") from exc
    raise ScenarioError(f"{path}.kind: expected 'circle' or 'rect', got {kind!r}")


def _obstacle(node, path) -> Obstacle:
    d = _obj(node, path, {"shape", "schedule"})
    if "shape" not in d:
        raise ScenarioError(f"{path}: missing 'shape'")
    shape = _shape(d["shape"], f"{path}.shape")
    schedule = []
    for i, entry in enumerate(_want(d.get("schedule", []), f"{path}.schedule",
                                    list, "a list")):
        e = _obj(entry, f"{path}.schedule[{i}]", {"t", "shape"})
        if "t" not in e or "shape" not in e:
            raise ScenarioError(f"{path}.schedule[{i}]: needs 't' and 'shape'")
        schedule.append((_number(e["t"], f"{path}.schedule[{i}].t"),
                         _shape(e["shape"], f"{path}.schedule[{i}].shape")))
    try:
        return Obstacle(shape, tuple(schedule))
    except ValueError as exc:
        raise ScenarioError(f"{path}: {exc}") from exc


def _config(node, path, cls, fields: dict):
    """Build a config dataclass from an optional JSON object."""
    if node is None:
        return cls()
    d = _obj(node, path, set(fields))
    kwargs = {}
    for name, convert in fields.items():
        if name in d:
            kwargs[name] = convert(d[name], f"{path}.{name}")
    try:
        return cls(**kwargs)
    except ValueError as exc:
        raise ScenarioError(f"{path}: {exc}") from exc


def _pair(node, path):
    p = _point(node, path)
    return (p[0], p[1])


def _matrix2(node, path):
    rows = _want(node, path, list, "a 2x2 matrix")
    if len(rows) != 2:
        raise ScenarioError(f"{path}: expected 2 rows")
    return tuple(_pair(row, f"{path}[{i}]") for i, row in enumerate(rows))


def _int_list(node, path):
    seq = _want(node, path, list, "a list of integers")
    return [_integer(v, f"{path}[{i}]") for i, v in enumerate(seq)]


def _str_list(node, path):
    seq = _want(node, path, list, "a list of strings")
    return [_want(v, f"{path}[{i}]", str, "a string") for i, v in enumerate(seq)]


_TOP_KEYS = {"version", "bounds", "start", "goal", "obstacles", "dynamics",
             "rrt", "mppi", "gains", "planner", "modes", "seeds", "output_dir"}


def scenario_from_dict(doc: dict) -> Scenario:
    d = _obj(doc, "$", _TOP_KEYS)
    version = d.get("version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ScenarioError(f"$.version: unsupported version {version!r}")
    for required in ("bounds", "start", "goal"):
        if required not in d:
            raise ScenarioError(f"$: missing required field '{required}'")

    bnode = _obj(d["bounds"], "$.bounds", {"lo", "hi"})
    try:
        bounds = Rect(_point(bnode.get("lo"), "$.bounds.lo"),
                      _point(bnode.get("hi"), "$.bounds.hi"))
    except ValueError as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(f"$.bounds: {exc}") from exc

    snode = _want(d["start"], "$.start", list, "a [x, y] or [x, y, theta, phi] list")
    if len(snode) not in (2, 4):
        raise ScenarioError(f"$.start: expected 2 or 4 numbers, got {len(snode)}")
    svals = [_number(v, f"$.start[{i}]") for i, v in enumerate(snode)]
    if len(svals) == 2:
        svals += [0.0, 0.0]
    start = State(*svals)

    goal = _point(d["goal"], "$.goal")

    obstacles = tuple(
        _obstacle(entry, f"$.obstacles[{i}]")
        for i, entry in enumerate(_want(d.get("obstacles", []), "$.obstacles",
                                        list, "a list")))
    try:
        env = Environment(bounds, (start.x, start.y), goal, obstacles)
    except ValueError as exc:
        raise ScenarioError(f"$: {exc}") from exc

    dynamics = _config(d.get("dynamics"), "$.dynamics", DynamicsParams, {
        "wheelbase": _number, "dt": _number, "noise_scale": _pair})
    rrt_cfg = _config(d.get("rrt"), "$.rrt", RrtConfig, {
        "gamma": _number, "max_iters": _integer, "goal_bias": _number,
        "resolution": _number, "seed": _integer})
    mppi_cfg = _config(d.get("mppi"), "$.mppi", MppiConfig, {
        "samples": _integer, "horizon": _integer, "temperature": _number,
        "sigma": _pair, "control_penalty": _matrix2, "obstacle_penalty": _number,
        "terminal_weight": _number, "freeze_obstacle_time": _boolean,
        "seed": _integer})
    gains = _config(d.get("gains"), "$.gains", NominalGains, {
        "v_max": _number, "alpha": _number, "k_p": _number,
        "lookahead": _integer})
    pnode = d.get("planner")
    pfields = {"replan_radius": _number, "goal_tolerance": _number,
               "max_wall_steps": _integer}
    pkwargs = {}
    if pnode is not None:
        pd = _obj(pnode, "$.planner", set(pfields))
        for name, convert in pfields.items():
            if name in pd:
                pkwargs[name] = convert(pd[name], f"$.planner.{name}")
    planner = PlannerConfig(rrt=rrt_cfg, mppi=mppi_cfg, gains=gains, **pkwargs)

    modes = _str_list(d.get("modes", ["rrt-mppi"]), "$.modes")
    seeds = _int_list(d.get("seeds", [0]), "$.seeds")
    output_dir = d.get("output_dir")
    if output_dir is not None:
        output_dir = _want(output_dir, "$.output_dir", str, "a string")
    return Scenario(env, start, dynamics, planner, modes, seeds, output_dir)


def _shape_to_dict(shape: Shape) -> dict:
    if isinstance(shape, Circle):
        return {"kind": "circle", "center": list(shape.center),
                "radius": shape.radius}
    return {"kind": "rect", "lo": list(shape.lo), "hi": list(shape.hi)}


def scenario_to_dict(sc: Scenario) -> dict:
    p = sc.planner
    return {
        "version": SCHEMA_VERSION,
        "bounds": {"lo": list(sc.env.bounds.lo), "hi": list(sc.env.bounds.hi)},
        "start": [sc.start.x, sc.start.y, sc.start.theta, sc.start.phi],
        "goal": list(sc.env.goal),
        "obstacles": [
            {"shape": _shape_to_dict(ob.shape),
             "schedule": [{"t": t, "shape": _shape_to_dict(s)}
                          for t, s in ob.schedule]}
            for ob in sc.env.obstacles],
        "dynamics": {"wheelbase": sc.dynamics.wheelbase, "dt": sc.dynamics.dt,
                     "noise_scale": list(sc.dynamics.noise_scale)},
        "rrt": asdict(p.rrt),
        "mppi": {**asdict(p.mppi),
                 "sigma": list(p.mppi.sigma),
                 "control_penalty": [list(r) for r in p.mppi.control_penalty]},
        "gains": asdict(p.gains),
        "planner": {"replan_radius": p.replan_radius,
                    "goal_tolerance": p.goal_tolerance,
                    "max_wall_steps": p.max_wall_steps},
        "modes": list(sc.modes),
        "seeds": list(sc.seeds),
        "output_dir": sc.output_dir,
    }


def _apply_env_overrides(doc: dict, environ) -> dict:
    """Merge RRTMPPI_* variables into the raw document.

    Variable names spell the JSON path with upper-cased components joined by
    underscores; since field names themselves contain underscores, the path
    is resolved greedily against the known keys at each level.
    """
    for name, raw in sorted(environ.items()):
        if not name.startswith(ENV_PREFIX + "_"):
            continue
        tokens = name[len(ENV_PREFIX) + 1:].lower().split("_")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        if not _set_by_tokens(doc, _SCHEMA_TREE, tokens, value):
            raise ScenarioError(f"environment override {name} matches no scenario field")
    return doc


# known nesting of object-valued fields; leaves map to None
_SCHEMA_TREE = {
    "version": None, "bounds": {"lo": None, "hi": None}, "start": None,
    "goal": None, "obstacles": None,
    "dynamics": {"wheelbase": None, "dt": None, "noise_scale": None},
    "rrt": {"gamma": None, "max_iters": None, "goal_bias": None,
            "resolution": None, "seed": None},
    "mppi": {"samples": None, "horizon": None, "temperature": None,
             "sigma": None, "control_penalty": None, "obstacle_penalty": None,
             "terminal_weight": None, "freeze_obstacle_time": None,
             "seed": None},
    "gains": {"v_max": None, "alpha": None, "k_p": None, "lookahead": None},
    "planner": {"replan_radius": None, "goal_tolerance": None,
                "max_wall_steps": None},
    "modes": None, "seeds": None, "output_dir": None,
}


def _set_by_tokens(node: dict, tree: dict, tokens: list[str], value) -> bool:
    # longest key first so e.g. replan_radius wins over a hypothetical replan
    for take in range(len(tokens), 0, -1):
        key = "_".join(tokens[:take])
        if key not in tree:
            continue
        rest = tokens[take:]
        subtree = tree[key]
        if not rest:
            if subtree is None or isinstance(value, dict):
                node[key] = value
                return True
            continue
        if subtree is None:
            continue
        child = node.setdefault(key, {})
        if isinstance(child, dict) and _set_by_tokens(child, subtree, rest, value):
            return True
    return False


def load_scenario(path, environ=None) -> Scenario:
    """Read, override, and validate a scenario file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ScenarioError("$: scenario root must be an object")
    doc = _apply_env_overrides(doc, os.environ if environ is None else environ)
    return scenario_from_dict(doc)


def save_scenario(sc: Scenario, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scenario_to_dict(sc), fh, indent=2)
        fh.write("\n")


def bundled_scenario_path(name: str) -> FsPath:
    """Filesystem path of a scenario shipped with the package."""
    return FsPath(str(resources.files("rrtmppi").joinpath("scenarios", f"{name}.json")))
