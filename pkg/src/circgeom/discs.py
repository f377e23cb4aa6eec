"""Disc kernel: support functions, containment in hulls of discs, ch_c.

A disc ``z`` lies in the convex hull of discs ``S`` iff its support function
is dominated, ``h_z(t) <= max_i h_i(t)`` for every direction ``t``.  A
separating direction satisfies ``(z.c - c_i) . u(t) > r_i - z.r`` for all
``i``; each such constraint is an open arc of directions, so containment
reduces to an exact emptiness test on an intersection of arcs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .closure import ClosedFamily, GroundSet, InputError
from .planar import (
    Circle,
    GeometryError,
    Line,
    Point,
    Triangle,
    cross,
    dot,
    intersect_lines,
    norm,
    orient,
    triangle_contains,
    unit,
)

TAU = 2 * math.pi
DEFAULT_TOLERANCE = 1e-9


def support(c: Circle, theta: float) -> float:
    return c.center.x * math.cos(theta) + c.center.y * math.sin(theta) + c.r


def _separating_arcs(z: Circle, hull: Sequence[Circle], eps: float) -> list[tuple[float, float]] | None:
    """Open arcs (center, half-width) of directions along which ``z`` pokes out.

    Returns ``None`` when some constraint admits no direction at all.
    """
    arcs = []
    for c in hull:
        ax = z.center.x - c.center.x
        ay = z.center.y - c.center.y
        b = c.r - z.r + eps
        la = math.hypot(ax, ay)
        if b >= la:
            return None
        if b < -la:
            continue
        arcs.append((math.atan2(ay, ax), math.acos(b / la)))
    return arcs


def _in_arc(theta: float, arc: tuple[float, float]) -> bool:
    d = (theta - arc[0] + math.pi) % TAU - math.pi
    return abs(d) < arc[1]


def _arcs_intersect(arcs: list[tuple[float, float]]) -> bool:
    if len(arcs) <= 1:
        return True
    ends = sorted(
        e % TAU for center, half in arcs for e in (center - half, center + half)
    )
    # membership is constant between consecutive endpoints
    for i, lo in enumerate(ends):
        hi = ends[(i + 1) % len(ends)]
        if i + 1 == len(ends):
            hi += TAU
        mid = 0.5 * (lo + hi)
        if all(_in_arc(mid, a) for a in arcs):
            return True
    return False


def disc_in_hull(z: Circle, hull: Sequence[Circle], eps: float = DEFAULT_TOLERANCE) -> bool:
    """True iff disc ``z`` lies in the convex hull of the union of ``hull``.

    Protrusions of at most ``eps`` count as contained.
    """
    if not hull:
        raise InputError("hull of an empty set of discs")
    arcs = _separating_arcs(z, hull, eps)
    if arcs is None:
        return True
    return not _arcs_intersect(arcs)


def hull_gap(z: Circle, hull: Sequence[Circle], samples: int = 4096) -> float:
    """Largest protrusion ``max_t h_z(t) - max_i h_i(t)``, by dense sampling.

    Diagnostic only: used to decide whether a verdict sits inside the
    tolerance band.  Positive means ``z`` sticks out of the hull.
    """
    theta = np.linspace(0.0, TAU, samples, endpoint=False)
    cos, sin = np.cos(theta), np.sin(theta)

    def gap(t):
        hz = z.center.x * np.cos(t) + z.center.y * np.sin(t) + z.r
        hs = np.max([c.center.x * np.cos(t) + c.center.y * np.sin(t) + c.r for c in hull], axis=0)
        return hz - hs

    values = z.center.x * cos + z.center.y * sin + z.r - np.max(
        [c.center.x * cos + c.center.y * sin + c.r for c in hull], axis=0
    )
    best = int(np.argmax(values))
    step = TAU / samples
    fine = np.linspace(theta[best] - step, theta[best] + step, 2001)
    return float(max(values[best], np.max(gap(fine))))


def point_in_hull(p, hull: Sequence[Circle], eps: float = DEFAULT_TOLERANCE) -> bool:
    return disc_in_hull(Circle(Point(float(p[0]), float(p[1])), 0.0), hull, eps)


@dataclass
class Scene:
    """Named discs on the plane with one tolerance for every predicate."""

    circles: dict[str, Circle]
    tolerance: float = DEFAULT_TOLERANCE
    triangle: Triangle | None = None

    def __post_init__(self) -> None:
        if self.tolerance <= 0:
            raise InputError("scene tolerance must be positive")
        self.circles = dict(self.circles)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.circles)

    def discs(self, names: Iterable[str]) -> list[Circle]:
        try:
            return [self.circles[n] for n in names]
        except KeyError as exc:
            raise InputError(f"unknown circle {exc.args[0]!r}") from None

    def with_vertices(self, names: Sequence[str] = ("A", "B", "C")) -> Scene:
        """Scene extended by the triangle's vertices as point-circles."""
        if self.triangle is None:
            raise InputError("scene has no triangle")
        extra = {n: Circle(v, 0.0) for n, v in zip(names, self.triangle.vertices)}
        return Scene({**self.circles, **extra}, self.tolerance, self.triangle)


def ch_c(scene: Scene, ys: Iterable[str]) -> frozenset[str]:
    """Circles whose discs lie in the hull of the discs named in ``ys``."""
    hull = scene.discs(ys)
    if not hull:
        return frozenset()
    return frozenset(
        name for name, z in scene.circles.items() if disc_in_hull(z, hull, scene.tolerance)
    )


def scene_alignment(scene: Scene) -> ClosedFamily:
    """The family of ch_c-closed subsets of the scene."""
    names = scene.names
    ground = GroundSet(names)
    discs = [scene.circles[n] for n in names]
    closed = set()
    for y in range(ground.full + 1):
        if y == 0:
            closed.add(0)
            continue
        hull = [discs[i] for i in range(len(discs)) if y >> i & 1]
        m = y
        for i, z in enumerate(discs):
            if not y >> i & 1 and disc_in_hull(z, hull, scene.tolerance):
                m |= 1 << i
        closed.add(m)
    return ClosedFamily.from_masks(ground, closed)


# -- tangents ---------------------------------------------------------------------

def tangent_points(p, c: Circle, eps: float = DEFAULT_TOLERANCE) -> tuple[Point, Point]:
    """Touch points of the two tangents from ``p``; the first lies to the left
    of the ray from ``p`` through the center."""
    p = Point(float(p[0]), float(p[1]))
    d = norm(p - c.center)
    if d <= c.r + eps:
        raise GeometryError("point is inside or on the circle")
    if c.r == 0:
        return c.center, c.center
    base = math.atan2(p.y - c.center.y, p.x - c.center.x)
    alpha = math.acos(c.r / d)
    t1 = c.center + unit(base + alpha).scale(c.r)
    t2 = c.center + unit(base - alpha).scale(c.r)
    to_center = c.center - p
    if cross(to_center, t1 - p) < 0:
        t1, t2 = t2, t1
    return t1, t2


class Tangent(NamedTuple):
    """A common tangent; both discs lie in ``{q : normal . q <= offset}``."""

    line: Line
    touch1: Point
    touch2: Point
    normal: Point
    offset: float


def external_tangents(c1: Circle, c2: Circle, eps: float = DEFAULT_TOLERANCE) -> tuple[Tangent, Tangent]:
    v = c2.center - c1.center
    length = norm(v)
    if length <= abs(c1.r - c2.r) + eps:
        raise GeometryError("one disc contains the other")
    phi = math.atan2(v.y, v.x)
    beta = math.acos((c1.r - c2.r) / length)
    out = []
    for sign in (1.0, -1.0):
        n = unit(phi + sign * beta)
        t1 = c1.center + n.scale(c1.r)
        t2 = c2.center + n.scale(c2.r)
        line = Line(t1, Point(-n.y, n.x))
        out.append(Tangent(line, t1, t2, n, dot(n, c1.center) + c1.r))
    return out[0], out[1]


# -- regions ----------------------------------------------------------------------

W1, W2, WN = "W1", "W2", "WN"


@dataclass(frozen=True)
class Region:
    """Curvilinear corner between an apex and a disc, or its complement.

    ``W1``/``WN`` is triangle(apex, touch1, touch2) minus the open disc.
    ``W2`` is the enclosing triangle minus the disc and the paired ``W1``.
    """

    kind: str
    apex: Point
    circle: Circle
    touch1: Point
    touch2: Point
    enclosing: Triangle | None = None

    @property
    def degenerate(self) -> bool:
        return abs(orient(self.apex, self.touch1, self.touch2)) < 1e-15

    def polygon(self) -> list[Point]:
        corner = [self.apex, self.touch1, self.touch2]
        if self.kind != W2:
            return corner
        if self.enclosing is None:
            raise InputError("W2 region needs an enclosing triangle")
        # keep the part of the triangle beyond the chord, away from the apex
        n = Point(-(self.touch2.y - self.touch1.y), self.touch2.x - self.touch1.x)
        if dot(n, self.apex - self.touch1) > 0:
            n = n.scale(-1.0)
        return clip_polygon(list(self.enclosing.vertices), n, dot(n, self.touch1))


def corner_region(apex, circle: Circle, kind: str = W1, eps: float = DEFAULT_TOLERANCE) -> Region:
    apex = Point(float(apex[0]), float(apex[1]))
    if circle.r == 0:
        return Region(kind, apex, circle, circle.center, circle.center)
    t1, t2 = tangent_points(apex, circle, eps)
    return Region(kind, apex, circle, t1, t2)


def far_region(tri: Triangle, apex, circle: Circle, eps: float = DEFAULT_TOLERANCE) -> Region:
    """The W2 complement of the corner at ``apex`` inside ``tri``."""
    near = corner_region(apex, circle, W1, eps)
    return Region(W2, near.apex, circle, near.touch1, near.touch2, tri)


def region_polygon_points(reg: Region, samples: int = 48) -> list[list[float]]:
    """Outline of a corner region: apex, touch1, the near arc, touch2."""
    c = reg.circle
    a1 = math.atan2(reg.touch1.y - c.center.y, reg.touch1.x - c.center.x)
    a2 = math.atan2(reg.touch2.y - c.center.y, reg.touch2.x - c.center.x)
    sweep = (a2 - a1) % TAU
    if sweep > math.pi:
        sweep -= TAU
    arc = [
        [c.center.x + c.r * math.cos(a1 + sweep * i / samples), c.center.y + c.r * math.sin(a1 + sweep * i / samples)]
        for i in range(samples + 1)
    ]
    return [[reg.apex.x, reg.apex.y], *arc]


def clip_polygon(poly: list[Point], n, offset: float) -> list[Point]:
    """Part of a convex polygon with ``n . q >= offset``."""
    out: list[Point] = []
    for i, p in enumerate(poly):
        q = poly[(i + 1) % len(poly)]
        dp, dq = dot(n, p) - offset, dot(n, q) - offset
        if dp >= 0:
            out.append(p)
        if (dp >= 0) != (dq >= 0):
            s = dp / (dp - dq)
            out.append(Point(p.x + s * (q.x - p.x), p.y + s * (q.y - p.y)))
    return out


def _outside_open_disc(p, c: Circle, eps: float) -> bool:
    return math.hypot(p[0] - c.center.x, p[1] - c.center.y) >= c.r - eps


def region_contains(reg: Region, p, eps: float = DEFAULT_TOLERANCE) -> bool:
    """Closed membership, except that the open disc is excluded."""
    if not _outside_open_disc(p, reg.circle, eps):
        return False
    if reg.kind == W2:
        if reg.enclosing is None or not reg.enclosing.contains_point(p, eps):
            return False
        paired = Region(W1, reg.apex, reg.circle, reg.touch1, reg.touch2)
        return reg.degenerate or not _corner_contains(paired, p, -eps)
    if reg.degenerate:
        return False
    return _corner_contains(reg, p, eps)


def _corner_contains(reg: Region, p, eps: float) -> bool:
    return triangle_contains(reg.apex, reg.touch1, reg.touch2, p, eps)


def _segment_circle_hits(a: Point, b: Point, c: Circle) -> list[Point]:
    d = b - a
    f = a - c.center
    qa = dot(d, d)
    if qa == 0:
        return []
    qb = 2 * dot(f, d)
    qc = dot(f, f) - c.r * c.r
    disc = qb * qb - 4 * qa * qc
    if disc < 0:
        return []
    root = math.sqrt(disc)
    hits = []
    for t in ((-qb - root) / (2 * qa), (-qb + root) / (2 * qa)):
        if 0.0 <= t <= 1.0:
            hits.append(Point(a.x + t * d.x, a.y + t * d.y))
    return hits


def _polygon_contains(poly: list[Point], p, eps: float = 0.0) -> bool:
    area = sum(cross(poly[i], poly[(i + 1) % len(poly)]) for i in range(len(poly)))
    sgn = 1.0 if area > 0 else -1.0
    for i, a in enumerate(poly):
        b = poly[(i + 1) % len(poly)]
        length = norm(b - a)
        if length == 0:
            continue
        if sgn * orient(a, b, p) / length < -eps:
            return False
    return True


def disc_meets_region(y: Circle, reg: Region, eps: float = DEFAULT_TOLERANCE) -> bool:
    """Does disc ``y`` reach more than ``eps`` into the region?

    The region is a convex polygon minus an open disc, so this asks whether
    the farthest point of ``y`` intersected with the polygon lies beyond the
    disc.  Distance from a point is convex, so its maximum over the convex
    set is attained at polygon vertices inside ``y``, at boundary crossings,
    or at the point of ``y`` farthest from the disc center.
    """
    if reg.degenerate and reg.kind != W2:
        return False
    poly = reg.polygon()
    if len(poly) < 3:
        return False
    q = reg.circle.center
    cands = [v for v in poly if norm(v - y.center) <= y.r]
    for i, a in enumerate(poly):
        cands.extend(_segment_circle_hits(a, poly[(i + 1) % len(poly)], y))
    away = y.center - q
    length = norm(away)
    far = y.center + (away.scale(y.r / length) if length > 0 else Point(y.r, 0.0))
    if _polygon_contains(poly, far):
        cands.append(far)
    if not cands:
        return False
    reach = max(norm(v - q) for v in cands)
    return reach > reg.circle.r + eps


# -- tangent triangle of three discs ------------------------------------------------

@dataclass(frozen=True)
class TangentTriangle:
    """Triangle cut out by the hull-supporting common tangents of three discs.

    ``vertices[i]`` is the corner whose angle has ``circles[i]`` inscribed;
    ``regions[i]`` is the curvilinear corner between that vertex and disc.
    """

    vertices: tuple[Point, Point, Point]
    circles: tuple[Circle, Circle, Circle]
    regions: tuple[Region, Region, Region]
    tangents: tuple[Tangent, Tangent, Tangent] = field(repr=False)

    def contains_point(self, p, eps: float = DEFAULT_TOLERANCE) -> bool:
        return triangle_contains(*self.vertices, p, eps)

    def hull_contains_point(self, p, eps: float = DEFAULT_TOLERANCE) -> bool:
        """Membership via triangle minus the three corner regions."""
        if not self.contains_point(p, eps):
            return False
        return not any(region_contains(r, p, -eps) for r in self.regions)


def _supporting_tangent(c1: Circle, c2: Circle, third: Circle, eps: float) -> Tangent:
    ok = [
        t for t in external_tangents(c1, c2, eps)
        if dot(t.normal, third.center) + third.r <= t.offset + eps
    ]
    if len(ok) != 1:
        raise GeometryError("pair has no unique hull-supporting tangent")
    return ok[0]


def tangent_triangle(a: Circle, b: Circle, c: Circle, eps: float = DEFAULT_TOLERANCE) -> TangentTriangle:
    for z, rest in ((a, (b, c)), (b, (a, c)), (c, (a, b))):
        if disc_in_hull(z, rest, eps):
            raise GeometryError("one disc lies in the hull of the other two")
    t_ab = _supporting_tangent(a, b, c, eps)
    t_bc = _supporting_tangent(b, c, a, eps)
    t_ca = _supporting_tangent(c, a, b, eps)
    par = 1e-9
    try:
        va = intersect_lines(t_ab.line, t_ca.line, par)
        vb = intersect_lines(t_ab.line, t_bc.line, par)
        vc = intersect_lines(t_bc.line, t_ca.line, par)
    except GeometryError as exc:
        raise GeometryError("tangent lines are (nearly) parallel") from exc
    if abs(orient(va, vb, vc)) <= eps:
        raise GeometryError("tangent triangle is degenerate")
    # an unbounded intersection of the half-planes leaves some vertex outside
    for v, t in ((va, t_bc), (vb, t_ca), (vc, t_ab)):
        if dot(t.normal, v) > t.offset + eps:
            raise GeometryError("supporting tangents do not bound a triangle")
    regions = (
        Region(W1, va, a, t_ab.touch1, t_ca.touch2),
        Region(W1, vb, b, t_ab.touch2, t_bc.touch1),
        Region(W1, vc, c, t_bc.touch2, t_ca.touch1),
    )
    return TangentTriangle((va, vb, vc), (a, b, c), regions, (t_ab, t_bc, t_ca))


def points_in_disc_apex_hull(points: np.ndarray, disc: Circle, apex) -> np.ndarray:
    """Vectorized membership in CHull(disc + {apex}) = disc U triangle(apex, T1, T2)."""
    pts = np.asarray(points, dtype=float)
    cx, cy = disc.center
    in_disc = np.hypot(pts[:, 0] - cx, pts[:, 1] - cy) <= disc.r
    if math.hypot(apex[0] - cx, apex[1] - cy) <= disc.r:
        return in_disc
    t1, t2 = tangent_points(apex, disc, 0.0)
    return in_disc | _points_in_triangle(pts, Point(*apex), t1, t2)


def _points_in_triangle(pts: np.ndarray, a, b, c, eps: float = 0.0) -> np.ndarray:
    def side(p, q):
        return (q[0] - p[0]) * (pts[:, 1] - p[1]) - (q[1] - p[1]) * (pts[:, 0] - p[0])

    s1, s2, s3 = side(a, b), side(b, c), side(c, a)
    if orient(a, b, c) < 0:
        s1, s2, s3 = -s1, -s2, -s3
    return (s1 >= -eps) & (s2 >= -eps) & (s3 >= -eps)


def sample_triangle(rng: np.random.Generator, a, b, c, size: int) -> np.ndarray:
    """Uniform points in triangle (a, b, c)."""
    u = rng.random(size)
    v = rng.random(size)
    flip = u + v > 1
    u[flip], v[flip] = 1 - u[flip], 1 - v[flip]
    a, b, c = (np.asarray(p, dtype=float) for p in (a, b, c))
    return a + np.outer(u, b - a) + np.outer(v, c - a)


def circles_from_mapping(data: Mapping[str, tuple[tuple[float, float], float]]) -> dict[str, Circle]:
    return {k: Circle.at(c[0], c[1], r) for k, (c, r) in data.items()}
