"""SVG composition: valid document, layers present, styles distinguish roles."""

import numpy as np

from conftest import blocked_env
from rrtmppi.env import Circle, Environment, Obstacle, Rect
from rrtmppi.render import render_svg, save_svg
from rrtmppi.rrt import Path


def test_document_skeleton():
    text = render_svg(blocked_env())
    assert text.startswith('<?xml version="1.0"')
    assert text.count("<svg") == 1 and text.rstrip().endswith("</svg>")
    assert "circle" in text                   # the obstacle made it in


def test_scheduled_shapes_are_dotted_outlines():
    env = Environment(
        bounds=Rect((0, 0), (10, 10)), start=(1, 1), goal=(9, 9),
        obstacles=(Obstacle(Circle((5.0, 5.0), 1.0),
                            schedule=((1.0, Circle((5.0, 5.0), 2.0)),)),))
    text = render_svg(env)
    assert "stroke-dasharray" in text
    assert "#c8c8c8" in text                  # base shape stays solid


def test_paths_and_trajectory_layers():
    env = blocked_env()
    nominal = Path(np.array([[2.0, 2.0], [5.0, 3.0], [18.0, 18.0]]))
    executed = [(2.0, 2.0), (2.2, 2.1), (2.4, 2.3)]
    text = render_svg(env, nominal=nominal, executed=executed)
    assert text.count("<polyline") == 2
    only_nominal = render_svg(env, nominal=nominal)
    assert only_nominal.count("<polyline") == 1


def test_save_svg_writes_file(tmp_path):
    out = tmp_path / "scene.svg"
    save_svg(render_svg(blocked_env()), out)
    assert out.read_text().startswith("<?xml")
