"""Geometry and scene files.

Geometry::

    {"elements": ["a", "b"], "closed_sets": [[], ["a"], ["a", "b"]]}
    {"elements": ["a", "b", "x", "y"], "implications": [{"lhs": ["a", "b"], "rhs": ["x", "y"]}]}

Scene::

    {"tolerance": 1e-9,
     "circles": [{"name": "x", "c": [0.1, 0.2], "r": 0.05}],
     "triangle": [[0, 0], [0, 1], [1, 0]]}
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .closure import ClosedFamily, GroundSet, InputError, closure_from_implications, implication
from .discs import DEFAULT_TOLERANCE, Scene
from .planar import Circle, GeometryError, Point, Triangle


def read_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _need(data: dict, key: str, kind: type | tuple, where: str) -> Any:
    if not isinstance(data, dict) or key not in data:
        raise InputError(f"{where}: missing field '{key}'")
    value = data[key]
    if not isinstance(value, kind):
        raise InputError(f"{where}.{key}: expected {getattr(kind, '__name__', kind)}")
    return value


def _names(value: Any, where: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise InputError(f"{where}: expected a list of element names")
    return value


def geometry_from_json(data: Any, where: str = "geometry") -> ClosedFamily:
    elements = _names(_need(data, "elements", list, where), f"{where}.elements")
    try:
        ground = GroundSet(tuple(elements))
    except InputError as exc:
        raise InputError(f"{where}.elements: {exc}") from exc
    has_sets, has_imps = "closed_sets" in data, "implications" in data
    if has_sets == has_imps:
        raise InputError(f"{where}: give exactly one of 'closed_sets' or 'implications'")
    if has_sets:
        sets = _need(data, "closed_sets", list, where)
        named = []
        for i, s in enumerate(sets):
            names = _names(s, f"{where}.closed_sets[{i}]")
            unknown = set(names) - set(elements)
            if unknown:
                raise InputError(f"{where}.closed_sets[{i}]: unknown elements {sorted(unknown)}")
            named.append(names)
        return ClosedFamily.from_names(ground, named)
    imps = []
    for i, imp in enumerate(_need(data, "implications", list, where)):
        lhs = _names(_need(imp, "lhs", list, f"{where}.implications[{i}]"), f"{where}.implications[{i}].lhs")
        rhs = _names(_need(imp, "rhs", list, f"{where}.implications[{i}]"), f"{where}.implications[{i}].rhs")
        unknown = (set(lhs) | set(rhs)) - set(elements)
        if unknown:
            raise InputError(f"{where}.implications[{i}]: unknown elements {sorted(unknown)}")
        imps.append(implication(ground, lhs, rhs))
    return closure_from_implications(ground, imps)


def geometry_to_json(g: ClosedFamily) -> dict:
    return {"elements": list(g.ground.elements), "closed_sets": [list(s) for s in g.named_sets()]}


def _point(value: Any, where: str) -> Point:
    if (not isinstance(value, list) or len(value) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
        raise InputError(f"{where}: expected [x, y]")
    if not all(math.isfinite(v) for v in value):
        raise InputError(f"{where}: coordinates must be finite")
    return Point(float(value[0]), float(value[1]))


def scene_from_json(data: Any, where: str = "scene") -> Scene:
    if not isinstance(data, dict):
        raise InputError(f"{where}: expected an object")
    tol = data.get("tolerance", DEFAULT_TOLERANCE)
    if not isinstance(tol, (int, float)) or not tol > 0:
        raise InputError(f"{where}.tolerance: must be a positive number")
    circles: dict[str, Circle] = {}
    for i, item in enumerate(_need(data, "circles", list, where)):
        at = f"{where}.circles[{i}]"
        name = _need(item, "name", str, at)
        if name in circles:
            raise InputError(f"{at}.name: duplicate circle '{name}'")
        r = _need(item, "r", (int, float), at)
        try:
            circles[name] = Circle.at(*_point(_need(item, "c", list, at), f"{at}.c"), r)
        except GeometryError as exc:
            raise InputError(f"{at}.r: {exc}") from exc
    tri = None
    if data.get("triangle") is not None:
        verts = _need(data, "triangle", list, where)
        if len(verts) != 3:
            raise InputError(f"{where}.triangle: expected three vertices")
        pts = [_point(v, f"{where}.triangle[{i}]") for i, v in enumerate(verts)]
        try:
            tri = Triangle.clockwise(*pts, float(tol))
        except GeometryError as exc:
            raise InputError(f"{where}.triangle: {exc}") from exc
    try:
        return Scene(circles, float(tol), tri)
    except InputError as exc:
        raise InputError(f"{where}: {exc}") from exc


def scene_to_json(scene: Scene) -> dict:
    out: dict = {
        "tolerance": scene.tolerance,
        "circles": [{"name": k, "c": [c.center.x, c.center.y], "r": c.r} for k, c in scene.circles.items()],
    }
    if scene.triangle is not None:
        out["triangle"] = [[v.x, v.y] for v in scene.triangle.vertices]
    return out


def load_geometry(path: str | Path) -> ClosedFamily:
    return geometry_from_json(read_json(path), str(path))


def load_scene(path: str | Path) -> Scene:
    return scene_from_json(read_json(path), str(path))


def dump(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=False)
