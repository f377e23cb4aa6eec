"""SVG figures for scenes and campaign reports.

Scenes are drawn in a fixed frame: the unit box (grown to a square around
the scene if needed) fills an 800x800 viewport with y pointing up, so
figures of similar scenes are directly comparable.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib
from matplotlib.figure import Figure
from matplotlib.patches import Circle as CirclePatch
from matplotlib.patches import Polygon

from .discs import Scene, region_polygon_points, tangent_points, tangent_triangle
from .lemmas import wn_region
from .planar import GeometryError

VIEWPORT = 800
_DPI = 72
_RC = {"svg.fonttype": "none", "svg.hashsalt": "circgeom", "font.size": 12}


def scene_frame(scene: Scene, extra: list[list[float]] = ()) -> tuple[float, float, float]:
    """(x0, y0, side) of the square drawn; the unit box unless the scene spills out."""
    xs, ys = [0.0, 1.0], [0.0, 1.0]
    xs += [p[0] for p in extra]
    ys += [p[1] for p in extra]
    for c in scene.circles.values():
        xs += [c.center.x - c.r, c.center.x + c.r]
        ys += [c.center.y - c.r, c.center.y + c.r]
    if scene.triangle is not None:
        xs += [v.x for v in scene.triangle.vertices]
        ys += [v.y for v in scene.triangle.vertices]
    lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    side = max(hi_x - lo_x, hi_y - lo_y)
    if (lo_x, lo_y, side) == (0.0, 0.0, 1.0):
        return 0.0, 0.0, 1.0
    pad = 0.05 * side
    return lo_x - pad, lo_y - pad, side + 2 * pad


def _new_figure() -> Figure:
    size = VIEWPORT / _DPI
    return Figure(figsize=(size, size), dpi=_DPI)


def _save(fig: Figure, path: str | Path) -> None:
    with matplotlib.rc_context(_RC):
        fig.savefig(path, format="svg", metadata={"Date": None})


def render_scene(scene: Scene, path: str | Path, regions: bool = False, tangents: bool = True) -> None:
    with matplotlib.rc_context(_RC):
        fig = _new_figure()
        ax = fig.add_axes((0, 0, 1, 1))
        shapes = _regions(scene) if regions else []
        x0, y0, side = scene_frame(scene, [p for _, poly in shapes for p in poly])
        ax.set_xlim(x0, x0 + side)
        ax.set_ylim(y0, y0 + side)
        ax.set_aspect("equal")
        ax.axis("off")
        tri = scene.triangle
        if tri is not None:
            ax.add_patch(Polygon([list(v) for v in tri.vertices], closed=True, fill=False,
                                 edgecolor="black", linewidth=1.2, gid="triangle"))
            for name, v in zip("ABC", tri.vertices):
                ax.text(v.x, v.y, name, ha="center", va="bottom", gid=f"vertex-{name}")
        for name, c in scene.circles.items():
            if c.r > 0:
                ax.add_patch(CirclePatch(tuple(c.center), c.r, fill=False, edgecolor="tab:blue",
                                         linewidth=1.2, gid=f"circle-{name}"))
            else:
                ax.plot([c.center.x], [c.center.y], "o", color="tab:blue", markersize=3, gid=f"circle-{name}")
            ax.text(c.center.x, c.center.y, name, ha="center", va="center", gid=f"label-{name}")
        if tangents and tri is not None:
            for name, c in scene.circles.items():
                for v in tri.vertices:
                    try:
                        touches = tangent_points(v, c, scene.tolerance)
                    except GeometryError:
                        continue
                    for t in touches:
                        ax.plot([v.x, t.x], [v.y, t.y], color="0.6", linewidth=0.6, gid=f"tangent-{name}")
        if regions:
            for gid, poly in shapes:
                if gid == "tangent-triangle":
                    ax.add_patch(Polygon(poly, closed=True, fill=False, edgecolor="0.4",
                                         linestyle="--", linewidth=0.8, gid=gid))
                else:
                    ax.add_patch(Polygon(poly, closed=True, facecolor="tab:orange", alpha=0.3,
                                         edgecolor="none", gid=gid))
        _save(fig, path)


def _regions(scene: Scene) -> list[tuple[str, list[list[float]]]]:
    out = []
    tri = scene.triangle
    if tri is not None and "x" in scene.circles:
        try:
            reg = wn_region(tri, scene.circles["x"], scene.tolerance)
            out.append(("region-wN", region_polygon_points(reg)))
        except GeometryError:
            pass
    if all(k in scene.circles for k in "abc"):
        try:
            tt = tangent_triangle(*(scene.circles[k] for k in "abc"), eps=scene.tolerance)
        except GeometryError:
            return out
        out.append(("tangent-triangle", [[v.x, v.y] for v in tt.vertices]))
        for name, reg in zip("ABC", tt.regions):
            out.append((f"region-w{name}", region_polygon_points(reg)))
    return out


def render_histogram(histogram: dict[str, int], path: str | Path, title: str = "") -> None:
    keys = list(histogram)
    with matplotlib.rc_context(_RC):
        fig = Figure(figsize=(10, 4), dpi=_DPI)
        ax = fig.add_subplot()
        ax.bar(range(len(keys)), [histogram[k] for k in keys], color="tab:blue")
        ax.set_xticks(range(len(keys)), keys, rotation=60)
        ax.set_ylabel("scenes")
        if title:
            ax.set_title(title)
        fig.tight_layout()
        _save(fig, path)
