from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circgeom import closure as cl
from circgeom.discs import (
    W1,
    Scene,
    ch_c,
    corner_region,
    disc_in_hull,
    disc_meets_region,
    external_tangents,
    far_region,
    hull_gap,
    region_contains,
    scene_alignment,
    support,
    tangent_points,
    tangent_triangle,
)
from circgeom.planar import Circle, GeometryError, Point, Triangle, norm

BAND = 1e-6


def dense_gap(z: Circle, hull: list[Circle], samples: int = 100_000) -> float:
    t = np.linspace(0.0, 2 * math.pi, samples, endpoint=False)
    u = np.stack([np.cos(t), np.sin(t)])
    hz = np.array(z.center) @ u + z.r
    hs = np.max([np.array(c.center) @ u + c.r for c in hull], axis=0)
    return float(np.max(hz - hs))


def test_support_examples():
    assert support(Circle.at(0, 0, 1), 0.7) == pytest.approx(1.0)
    assert support(Circle.at(3, 4), 0.0) == pytest.approx(3.0)
    c = Circle.at(2, 0, 1)
    assert support(c, math.pi) == pytest.approx(-1.0)
    # the boundary point farthest along the direction agrees
    pts = [(2 + math.cos(a), math.sin(a)) for a in np.linspace(0, 2 * math.pi, 3601)]
    assert max(-p[0] for p in pts) == pytest.approx(-1.0, abs=1e-6)


def test_disc_in_hull_examples():
    s = [Circle.at(-2, 0, 1), Circle.at(2, 0, 1)]
    assert disc_in_hull(Circle.at(0, 0, 0.5), s)
    assert not disc_in_hull(Circle.at(0, 1.2, 0.5), s)
    assert disc_in_hull(s[0], s)
    assert dense_gap(Circle.at(0, 0, 0.5), s) <= 0
    assert dense_gap(Circle.at(0, 1.2, 0.5), s) > 0
    with pytest.raises(cl.InputError):
        disc_in_hull(s[0], [])


def test_disc_in_hull_point_hulls():
    tri = [Circle.at(0, 0), Circle.at(1, 0), Circle.at(0, 1)]
    assert disc_in_hull(Circle.at(0.2, 0.2, 0.1), tri)
    assert not disc_in_hull(Circle.at(0.2, 0.2, 0.25), tri)
    assert disc_in_hull(Circle.at(0.5, 0.5), tri)
    assert not disc_in_hull(Circle.at(0.5, 0.5 + 1e-6), tri)


def _random_instance(rng):
    k = int(rng.integers(1, 5))
    hull = [Circle.at(*rng.random(2), float(rng.uniform(0, 0.3))) for _ in range(k)]
    if rng.random() < 0.5:
        w = rng.dirichlet(np.ones(k))
        c = sum(wi * np.array(h.center) for wi, h in zip(w, hull))
        z = Circle.at(*c, float(rng.uniform(0, 0.3)))
    else:
        z = Circle.at(*rng.random(2), float(rng.uniform(0, 0.3)))
    return z, hull


def _dense_gaps(instances, samples: int = 100_000, chunk: int = 50) -> np.ndarray:
    t = np.linspace(0.0, 2 * math.pi, samples, endpoint=False)
    cos, sin = np.cos(t), np.sin(t)
    out = []
    for i in range(0, len(instances), chunk):
        part = instances[i:i + chunk]
        # pad every hull to four discs by repeating its first member
        z = np.array([[c.center.x, c.center.y, c.r] for c, _ in part])
        h = np.array([[[c.center.x, c.center.y, c.r] for c in (hull + [hull[0]] * 4)[:4]] for _, hull in part])
        hz = z[:, :1] * cos + z[:, 1:2] * sin + z[:, 2:]
        hs = (h[:, :, :1] * cos + h[:, :, 1:2] * sin + h[:, :, 2:]).max(axis=1)
        out.append((hz - hs).max(axis=1))
    return np.concatenate(out)


@pytest.mark.slow
def test_disc_in_hull_agrees_with_dense_oracle():
    rng = np.random.default_rng(2024)
    instances = [_random_instance(rng) for _ in range(10_000)]
    gaps = _dense_gaps(instances)
    decided = 0
    for (z, hull), gap in zip(instances, gaps):
        if abs(gap) <= BAND:
            continue
        decided += 1
        assert disc_in_hull(z, hull) == (gap < 0), (z, hull, gap)
    assert decided > 9_000


def test_hull_gap_matches_dense_oracle():
    rng = np.random.default_rng(5)
    for _ in range(200):
        z, hull = _random_instance(rng)
        # both sides sample; each misses the true maximum by at most a slope times the step
        assert hull_gap(z, hull) == pytest.approx(dense_gap(z, hull), abs=1e-4)


def test_ch_c_examples():
    x = Circle.at(0.5, 0.5, 0.3)
    y = Circle.at(0.55, 0.5, 0.1)
    far = Circle.at(0.1, 0.9, 0.05)
    scene = Scene({"x": x, "y": y, "far": far})
    assert ch_c(scene, []) == frozenset()
    assert ch_c(scene, ["x"]) == {"x", "y"}
    assert ch_c(scene, scene.names) == set(scene.names)


def _random_scene(rng, k):
    return Scene({f"c{i}": Circle.at(*rng.random(2), float(rng.uniform(0, 0.15))) for i in range(k)})


def test_ch_c_is_a_closure_operator():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        scene = _random_scene(rng, int(rng.integers(1, 9)))
        names = scene.names
        a = {n for n in names if rng.random() < 0.4}
        b = a | {n for n in names if rng.random() < 0.4}
        ca, cb = ch_c(scene, a), ch_c(scene, b)
        assert a <= ca
        assert ca <= cb
        assert ch_c(scene, ca) == ca


def test_scene_alignment_examples():
    one = scene_alignment(Scene({"a": Circle.at(0.5, 0.5, 0.1)}))
    assert one.named_sets() == [[], ["a"]]
    two = scene_alignment(Scene({"a": Circle.at(0.2, 0.5, 0.1), "b": Circle.at(0.8, 0.5, 0.1)}))
    assert two.sets == cl.powerset(("a", "b")).sets


def test_scene_alignment_size_cap():
    scene = Scene({f"c{i}": Circle.at(i, 0, 0.1) for i in range(17)})
    with pytest.raises(cl.InputError):
        scene_alignment(scene)


def test_tangent_points_examples():
    t1, t2 = tangent_points((0, 0), Circle.at(2, 0, 1))
    assert t1 == pytest.approx((1.5, math.sqrt(3) / 2))
    assert t2 == pytest.approx((1.5, -math.sqrt(3) / 2))
    p = Circle.at(0.3, 0.1)
    assert tangent_points((1, 1), p) == (p.center, p.center)
    with pytest.raises(GeometryError):
        tangent_points((2, 0.5), Circle.at(2, 0, 1))


@settings(max_examples=200, deadline=None)
@given(
    st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5), st.floats(0.01, 2),
)
def test_tangent_points_defining_equations(px, py, cx, cy, r):
    c = Circle.at(cx, cy, r)
    if math.hypot(px - cx, py - cy) <= r * 1.01:
        return
    for t in tangent_points((px, py), c):
        assert norm(t - c.center) == pytest.approx(r, rel=1e-9)
        orth = (px - t.x) * (t.x - cx) + (py - t.y) * (t.y - cy)
        assert abs(orth) <= 1e-9 * max(1.0, math.hypot(px - cx, py - cy)) ** 2
    # mirror image across the x-axis swaps the pair
    m1, m2 = tangent_points((px, -py), Circle.at(cx, -cy, r))
    t1, t2 = tangent_points((px, py), c)
    assert (m1.x, -m1.y) == pytest.approx(tuple(t2), abs=1e-9)
    assert (m2.x, -m2.y) == pytest.approx(tuple(t1), abs=1e-9)


def test_external_tangents_examples():
    lines = external_tangents(Circle.at(0, 0, 1), Circle.at(4, 0, 1))
    ys = sorted(t.line.point.y for t in lines)
    assert ys == pytest.approx([-1, 1])
    for t in lines:
        assert abs(t.line.direction.y) == pytest.approx(0, abs=1e-12)
    a, b = Circle.at(0, 0), Circle.at(1, 1)
    for t in external_tangents(a, b):
        assert t.line.signed_distance(a.center) == pytest.approx(0, abs=1e-12)
        assert t.line.signed_distance(b.center) == pytest.approx(0, abs=1e-12)
    with pytest.raises(GeometryError):
        external_tangents(Circle.at(0, 0, 1), Circle.at(0.1, 0, 0.5))


def test_external_tangents_scale():
    c1, c2 = Circle.at(0.1, 0.2, 0.3), Circle.at(1.5, 0.7, 0.1)
    base = external_tangents(c1, c2)
    scaled = external_tangents(Circle.at(0.3, 0.6, 0.9), Circle.at(4.5, 2.1, 0.3))
    for t, s in zip(base, scaled):
        assert tuple(s.touch1) == pytest.approx(tuple(3 * v for v in t.touch1))
        assert tuple(s.touch2) == pytest.approx(tuple(3 * v for v in t.touch2))
    for t in base:
        for c in (c1, c2):
            assert abs(t.line.signed_distance(c.center)) == pytest.approx(c.r)


def test_tangent_triangle_equilateral():
    r = 0.1
    centers = [(math.cos(a), math.sin(a)) for a in (math.pi / 2, math.pi / 2 + 2 * math.pi / 3, math.pi / 2 + 4 * math.pi / 3)]
    tt = tangent_triangle(*(Circle.at(x, y, r) for x, y in centers))
    radii = [math.hypot(*v) for v in tt.vertices]
    assert radii == pytest.approx([radii[0]] * 3)
    # vertex i sits on the ray through center i, pushed out by r / sin(30 degrees)
    for v, c in zip(tt.vertices, centers):
        assert v.x * c[1] - v.y * c[0] == pytest.approx(0, abs=1e-12)
        assert math.hypot(*v) == pytest.approx(1 + 2 * r)


def test_tangent_triangle_of_points():
    pts = [Circle.at(0, 0), Circle.at(1, 0), Circle.at(0.3, 0.8)]
    tt = tangent_triangle(*pts)
    assert {tuple(round(c, 12) for c in v) for v in tt.vertices} == {(0.0, 0.0), (1.0, 0.0), (0.3, 0.8)}
    assert all(r.degenerate for r in tt.regions)


def test_tangent_triangle_rejects_containment():
    with pytest.raises(GeometryError):
        tangent_triangle(Circle.at(0, 0, 0.2), Circle.at(1, 0, 0.2), Circle.at(0.5, 0, 0.1))


def test_tangent_triangle_decomposition_identity():
    rng = np.random.default_rng(3)
    checked = 0
    for _ in range(300):
        abc = [Circle.at(*rng.random(2), float(rng.uniform(0, 0.2))) for _ in range(3)]
        try:
            tt = tangent_triangle(*abc)
        except GeometryError:
            continue
        verts = np.array(tt.vertices)
        for w in rng.dirichlet(np.ones(3), 30):
            p = Point(*(w @ verts))
            gap = hull_gap(Circle(p, 0.0), abc)
            if abs(gap) < 1e-7:
                continue
            assert tt.hull_contains_point(p, 0.0) == (gap < 0)
            checked += 1
    assert checked > 3000


def test_region_examples():
    apex = Point(0, 0)
    disc = Circle.at(2, 0, 1)
    reg = corner_region(apex, disc, W1)
    assert region_contains(reg, apex)
    assert not region_contains(reg, (2, 0))
    assert region_contains(reg, (0.5, 0))
    assert not region_contains(reg, (0.5, 0.5))
    assert not region_contains(reg, (3.5, 0))


def test_region_half_plane_cross_check():
    apex = Point(0.1, 0.2)
    disc = Circle.at(0.7, 0.5, 0.2)
    reg = corner_region(apex, disc, W1)
    t1, t2 = reg.touch1, reg.touch2
    rng = np.random.default_rng(0)
    for p in rng.uniform(-0.2, 1.2, (3000, 2)):
        # triangle membership via the three half-planes, then outside the disc
        def side(a, b):
            return (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])

        s = [side(apex, t1), side(t1, t2), side(t2, apex)]
        in_tri = all(v >= 0 for v in s) or all(v <= 0 for v in s)
        outside = math.hypot(p[0] - 0.7, p[1] - 0.5) >= 0.2
        if min(abs(v) for v in s) < 1e-9 or abs(math.hypot(p[0] - 0.7, p[1] - 0.5) - 0.2) < 1e-9:
            continue
        assert region_contains(reg, p) == (in_tri and outside)


def test_w1_w2_partition_triangle():
    tri = Triangle.clockwise((0, 0), (1, 0.1), (0.4, 0.9))
    disc = Circle.at(0.3, 0.25, 0.12)
    w1 = corner_region(tri.A, disc, W1)
    w2 = far_region(tri, tri.A, disc)
    rng = np.random.default_rng(8)
    for p in rng.random((3000, 2)):
        if not tri.contains_point(p, -1e-9):
            continue
        if math.hypot(p[0] - 0.3, p[1] - 0.25) < 0.12 - 1e-9:
            assert not region_contains(w1, p) and not region_contains(w2, p)
            continue
        assert region_contains(w1, p, -1e-9) + region_contains(w2, p, -1e-9) <= 1


def test_disc_meets_region_against_sampling():
    apex = Point(0, 0)
    disc = Circle.at(1, 0.3, 0.3)
    reg = corner_region(apex, disc, W1)
    rng = np.random.default_rng(1)
    for _ in range(400):
        y = Circle.at(*rng.uniform(-0.3, 1.3, 2), float(rng.uniform(0.01, 0.3)))
        ang = rng.uniform(0, 2 * math.pi, 4000)
        rad = y.r * np.sqrt(rng.random(4000))
        pts = np.stack([y.center.x + rad * np.cos(ang), y.center.y + rad * np.sin(ang)], axis=1)
        hit = any(region_contains(reg, p, -1e-6) for p in pts)
        if hit:
            assert disc_meets_region(y, reg)
