from __future__ import annotations

import json
import re

import pytest

from circgeom import closure as cl
from circgeom.fileio import (
    geometry_from_json,
    geometry_to_json,
    load_geometry,
    load_scene,
    scene_from_json,
    scene_to_json,
)


def test_geometry_round_trip():
    _, g = cl.counterexample_geometries()
    again = geometry_from_json(json.loads(json.dumps(geometry_to_json(g))))
    assert again.sets == g.sets
    assert again.ground.elements == g.ground.elements


def test_geometry_from_implications():
    data = {"elements": ["a", "b", "x", "y"], "implications": [{"lhs": ["a", "b"], "rhs": ["x", "y"]}]}
    g = geometry_from_json(data)
    assert len(g) == 13


@pytest.mark.parametrize(
    "data,where",
    [
        ({}, "missing field 'elements'"),
        ({"elements": ["a"]}, "exactly one of"),
        ({"elements": ["a"], "closed_sets": [], "implications": []}, "exactly one of"),
        ({"elements": ["a"], "closed_sets": [["b"]]}, "closed_sets[0]"),
        ({"elements": ["a"], "closed_sets": [[1]]}, "closed_sets[0]"),
        ({"elements": ["a", "a"], "closed_sets": []}, "elements"),
        ({"elements": ["a"], "implications": [{"lhs": ["a"]}]}, "implications[0]"),
    ],
)
def test_geometry_errors_name_the_field(data, where):
    with pytest.raises(cl.InputError, match=re.escape(where)):
        geometry_from_json(data)


def test_scene_round_trip():
    data = {
        "tolerance": 1e-8,
        "circles": [{"name": "x", "c": [0.3, 0.3], "r": 0.1}, {"name": "y", "c": [0.5, 0.2], "r": 0}],
        "triangle": [[0, 0], [1, 0], [0, 1]],
    }
    scene = scene_from_json(data)
    assert scene.tolerance == 1e-8
    assert scene_from_json(scene_to_json(scene)) == scene
    # vertices come back in clockwise order
    assert scene_to_json(scene)["triangle"] == [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]


@pytest.mark.parametrize(
    "data,where",
    [
        ([], "expected an object"),
        ({"circles": [{"name": "x", "c": [0, 0]}]}, "circles[0]"),
        ({"circles": [{"name": "x", "c": [0, 0], "r": -1}]}, "circles[0].r"),
        ({"circles": [{"name": "x", "c": [0], "r": 1}]}, "circles[0].c"),
        ({"circles": [{"name": "x", "c": [0, 0], "r": 1}, {"name": "x", "c": [1, 1], "r": 1}]}, "duplicate"),
        ({"circles": [], "triangle": [[0, 0], [1, 1], [2, 2]]}, "triangle"),
        ({"circles": [], "tolerance": 0}, "tolerance"),
    ],
)
def test_scene_errors_name_the_field(data, where):
    with pytest.raises(cl.InputError, match=re.escape(where)):
        scene_from_json(data)


def test_bad_json_reports_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"elements": ["a",\n  ]}')
    with pytest.raises(cl.InputError, match=r"bad\.json:2:3"):
        load_geometry(p)
    with pytest.raises(cl.InputError, match="missing.json"):
        load_scene(tmp_path / "missing.json")
