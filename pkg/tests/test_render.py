import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from rrtplus.chain import forward_kinematics
from rrtplus.render import poses_along_path, render_solution_svg
from rrtplus.scenario import make_scenario

SVG = "{http://www.w3.org/2000/svg}"


def _path(n):
    a = np.zeros(n)
    b = np.zeros(n)
    b[0] = math.pi / 2
    mid = a.copy()
    mid[1] = 0.4
    return [a, mid, b]


def test_frames_are_arc_length_spaced():
    path = [np.zeros(2), np.array([1.0, 0.0]), np.array([1.0, 3.0])]
    poses = poses_along_path(path, 5)
    np.testing.assert_allclose(poses[0], [0, 0])
    np.testing.assert_allclose(poses[1], [1, 0])
    np.testing.assert_allclose(poses[2], [1, 1])
    np.testing.assert_allclose(poses[4], [1, 3])


def test_single_node_and_errors():
    assert len(poses_along_path([np.zeros(3)], 4)) == 4
    with pytest.raises(ValueError):
        poses_along_path([], 3)
    with pytest.raises(ValueError):
        poses_along_path([np.zeros(2)], 1)


@pytest.mark.parametrize("kind", ["empty", "cluttered", "horn"])
def test_svg_is_well_formed(kind):
    spec = make_scenario(kind, 8, seed=2)
    svg = render_solution_svg(spec, _path(8), frames=6)
    root = ET.fromstring(svg.encode())
    assert root.tag == SVG + "svg"
    poses = root.findall(f".//{SVG}polyline")
    assert len(poses) == 6
    assert len(root.findall(f".//*[@class='obstacle']")) == len(spec.environment.obstacles)
    start = [p for p in poses if p.get("class") == "pose start"][0]
    pts = [tuple(map(float, xy.split(","))) for xy in start.get("points").split()]
    np.testing.assert_allclose(pts, forward_kinematics(spec.robot, np.zeros(8)), atol=1e-6)


def test_svg_is_reproducible():
    spec = make_scenario("easy", 6, seed=1)
    assert render_solution_svg(spec, _path(6)) == render_solution_svg(spec, _path(6))
    assert "-0.000000" not in render_solution_svg(spec, _path(6))
