"""Scenario files: schema validation, round-trips, environment overrides."""

import json

import pytest

from rrtmppi.scenario import (Scenario, ScenarioError, bundled_scenario_path,
                              load_scenario, save_scenario, scenario_to_dict)

BUNDLED = ["static", "dynamic-grow-2", "dynamic-grow-4", "replan-sweep"]


def _minimal_doc(**over):
    doc = {
        "version": 1,
        "bounds": [[0.0, 0.0], [20.0, 20.0]],
        "start": [2.0, 2.0],
        "goal": [18.0, 18.0],
        "obstacles": [
            {"shape": {"kind": "circle", "center": [10.0, 10.0], "radius": 2.0},
             "schedule": [{"t": 1.0,
                           "shape": {"kind": "circle", "center": [10.0, 10.0],
                                     "radius": 3.0}}]},
            {"shape": {"kind": "rect", "lo": [1.0, 15.0], "hi": [3.0, 18.0]}},
        ],
    }
    doc.update(over)
    return doc


def _write(tmp_path, doc, name="sc.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return p


# ------------------------------------------------------------ happy paths

def test_bundled_scenarios_exist_and_load():
    for name in BUNDLED:
        path = bundled_scenario_path(name)
        assert path.is_file()
        sc = load_scenario(path, environ={})
        assert isinstance(sc, Scenario)
        assert sc.modes and sc.seeds


def test_bundled_scenarios_round_trip(tmp_path):
    for name in BUNDLED:
        sc = load_scenario(bundled_scenario_path(name), environ={})
        out = tmp_path / f"{name}.json"
        save_scenario(sc, out)
        again = load_scenario(out, environ={})
        assert scenario_to_dict(again) == scenario_to_dict(sc)


def test_minimal_document_gets_defaults(tmp_path):
    sc = load_scenario(_write(tmp_path, _minimal_doc()), environ={})
    assert sc.env.start == (2.0, 2.0)
    assert sc.planner.mppi.samples > 0
    assert sc.start is None                  # no explicit pose requested
    assert len(sc.env.obstacles) == 2
    assert sc.env.obstacles[0].schedule[0][0] == 1.0


def test_start_pose_variants(tmp_path):
    two = load_scenario(_write(tmp_path, _minimal_doc()), environ={})
    assert two.start is None
    doc = _minimal_doc(start=[2.0, 2.0, 0.5, 0.1])
    four = load_scenario(_write(tmp_path, doc), environ={})
    assert four.start == (2.0, 2.0, 0.5, 0.1)


# ------------------------------------------------------------- validation

@pytest.mark.parametrize("mutate, fragment", [
    (lambda d: d.pop("bounds"), "bounds"),
    (lambda d: d.update(version=99), "version"),
    (lambda d: d.update(nonsense=1), "unknown"),
    (lambda d: d["obstacles"][0]["shape"].update(kind="blob"), "obstacles[0]"),
    (lambda d: d["obstacles"][1]["shape"].update(lo=[5.0, 5.0], hi=[4.0, 9.0]),
     "obstacles[1]"),
    (lambda d: d.update(start=[1.0]), "start"),
])
def test_malformed_documents_name_the_field(tmp_path, mutate, fragment):
    doc = _minimal_doc()
    mutate(doc)
    with pytest.raises(ScenarioError) as err:
        load_scenario(_write(tmp_path, doc), environ={})
    assert fragment in str(err.value)


def test_invalid_json_and_missing_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ScenarioError):
        load_scenario(bad, environ={})
    with pytest.raises(ScenarioError):
        load_scenario(tmp_path / "absent.json", environ={})


# -------------------------------------------------------------- overrides

def test_environment_overrides(tmp_path):
    path = _write(tmp_path, _minimal_doc())
    sc = load_scenario(path, environ={
        "RRTMPPI_MPPI_SAMPLES": "64",
        "RRTMPPI_PLANNER_REPLAN_RADIUS": "2.5",
        "RRTMPPI_RRT_GOAL_BIAS": "0.2",      # multi-underscore field name
        "RRTMPPI_PLANNER_MAX_WALL_STEPS": "123",
    })
    assert sc.planner.mppi.samples == 64
    assert sc.planner.replan_radius == 2.5
    assert sc.planner.rrt.goal_bias == 0.2
    assert sc.planner.max_wall_steps == 123


def test_override_ignores_foreign_variables(tmp_path):
    path = _write(tmp_path, _minimal_doc())
    sc = load_scenario(path, environ={"HOME": "/nowhere", "PATH": "/bin"})
    assert isinstance(sc, Scenario)


def test_unresolvable_override_is_an_error(tmp_path):
    path = _write(tmp_path, _minimal_doc())
    with pytest.raises(ScenarioError):
        load_scenario(path, environ={"RRTMPPI_NO_SUCH_FIELD": "1"})


def test_unknown_bundled_name():
    with pytest.raises((ScenarioError, FileNotFoundError, KeyError)):
        bundled_scenario_path("does-not-exist")
