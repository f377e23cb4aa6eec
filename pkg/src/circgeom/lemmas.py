"""Executable forms of the corner-region lemmas used by the triangle proof.

Each lemma gets a seeded instance generator that enforces its hypotheses and a
checker that evaluates its conclusion.  Verdicts are ``pass``, ``fail``,
``band`` (the conclusion misses by no more than the tolerance band, so the
verdict is numerically undecidable), ``vacuous`` (hypotheses hold but the
conclusion has nothing to assert) or ``rejected`` (hypotheses do not hold).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .discs import (
    DEFAULT_TOLERANCE,
    W1,
    W2,
    WN,
    Region,
    corner_region,
    disc_in_hull,
    disc_meets_region,
    far_region,
    hull_gap,
    point_in_hull,
    points_in_disc_apex_hull,
    sample_triangle,
    tangent_points,
)
from .planar import Circle, GeometryError, Line, Point, Triangle, cross, intersect_lines, norm, orient, unit
from .triangles import lemma_acn_point, sufficient_conditions

LEMMAS = ("L4.2", "C4.3", "L4.4", "L4.5", "C4.6")
PASS, FAIL, BAND, VACUOUS, REJECTED = "pass", "fail", "band", "vacuous", "rejected"


@dataclass
class LemmaInstance:
    lemma: str
    tri: Triangle
    circles: dict[str, Circle]
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "lemma": self.lemma,
            "triangle": [list(v) for v in self.tri.vertices],
            "circles": [{"name": k, "c": list(c.center), "r": c.r} for k, c in self.circles.items()],
            "params": {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.params.items()},
        }


@dataclass(frozen=True)
class LemmaVerdict:
    lemma: str
    status: str
    detail: dict = field(default_factory=dict)


def wn_region(tri: Triangle, x: Circle, eps: float = DEFAULT_TOLERANCE) -> Region:
    """The area of CHull(x + {N}) outside disc x."""
    n = lemma_acn_point(tri, x)
    if norm(n - x.center) <= x.r + eps:
        raise GeometryError("N lies in disc x")
    return corner_region(n, x, WN, eps)


# -- generators -----------------------------------------------------------------------------

def _random_triangle(rng: np.random.Generator, min_area: float = 0.1) -> Triangle:
    while True:
        v = rng.random((3, 2))
        try:
            tri = Triangle.clockwise(*v)
        except GeometryError:
            continue
        if tri.area >= min_area:
            return tri


def _unit(v) -> Point:
    n = norm(v)
    return Point(v[0] / n, v[1] / n)


def _angle_depth(tri: Triangle, p) -> float:
    """Signed distance from ``p`` to the nearer of the two lines at A (positive inside the angle)."""
    a, b, c = tri.A, tri.B, tri.C
    d1 = cross(_unit(b - a), p - a)
    d2 = cross(_unit(c - a), p - a)
    s1 = 1.0 if cross(b - a, c - a) > 0 else -1.0
    return min(s1 * d1, -s1 * d2)


def inscribed_in_angle(tri: Triangle, t: float, inside: bool = True, margin: float = 1e-3) -> Circle:
    """Circle inscribed in the angle at A with center at fraction ``t`` of the
    way along the bisector to the largest admissible position."""
    a, b, c = tri.A, tri.B, tri.C
    bis = _unit(_unit(b - a) + _unit(c - a))
    half = math.acos(max(-1.0, min(1.0, _unit(b - a)[0] * _unit(c - a)[0] + _unit(b - a)[1] * _unit(c - a)[1]))) / 2
    s = math.sin(half)
    if inside:
        # the distance to BC must exceed the radius by the margin
        lo, hi = 0.0, norm(b - a) + norm(c - a)
        for _ in range(60):
            mid = (lo + hi) / 2
            o = a + bis.scale(mid)
            if -orient(b, c, o) / norm(c - b) - mid * s > margin:
                lo = mid
            else:
                hi = mid
        dmax = lo
    else:
        dmax = 2.0
    d = max(t * dmax, 1e-6)
    return Circle(a + bis.scale(d), d * s)


def _point_in_corner(rng, reg: Region, tries: int = 200) -> Point | None:
    """Uniform point of the W1/WN corner (triangle minus disc)."""
    for _ in range(tries):
        q = sample_triangle(rng, reg.apex, reg.touch1, reg.touch2, 1)[0]
        p = Point(float(q[0]), float(q[1]))
        if norm(p - reg.circle.center) > reg.circle.r:
            return p
    return None


def generate(lemma: str, rng: np.random.Generator, margin: float = 1e-3) -> LemmaInstance | None:
    """One hypothesis-targeted instance, or ``None`` if construction failed."""
    tri = _random_triangle(rng)
    if lemma in ("L4.2", "C4.3", "L4.4"):
        p = inscribed_in_angle(tri, float(rng.uniform(0.05, 1.0)), inside=lemma != "L4.4", margin=margin)
        reg = corner_region(tri.A, p, W1)
        if lemma == "L4.4":
            return LemmaInstance(lemma, tri, {"s": p}, {
                "near": float(rng.random()), "far": float(rng.random()),
            })
        if lemma == "L4.2":
            q = _point_in_corner(rng, reg)
            if q is None:
                return None
            room = _angle_depth(tri, q)
            if room <= 2 * margin:
                return None
            ang = float(rng.uniform(0, 2 * math.pi))
            off = float(rng.uniform(0, 0.5)) * room
            center = q + unit(ang).scale(off)
            rmax = _angle_depth(tri, center) - margin
            rmin = off + margin
            if rmax <= rmin:
                return None
            y = Circle(center, float(rng.uniform(rmin, rmax)))
            return LemmaInstance(lemma, tri, {"p": p, "y": y}, {"witness": tuple(q)})
        # C4.3: y anywhere in the triangle, biased toward the corner half the time
        if rng.random() < 0.5:
            q = _point_in_corner(rng, reg)
            if q is None:
                return None
            center = q
        else:
            v = sample_triangle(rng, *tri.vertices, 1)[0]
            center = Point(float(v[0]), float(v[1]))
        room = tri.inner_distance(center) - margin
        if room <= margin:
            return None
        y = Circle(center, float(rng.uniform(margin, room)))
        return LemmaInstance(lemma, tri, {"p": p, "y": y})
    x = _circle_in(rng, tri, margin)
    if x is None:
        return None
    if lemma == "L4.5":
        return LemmaInstance(lemma, tri, {"x": x}, {"samples": 1000})
    if lemma == "C4.6":
        try:
            n = lemma_acn_point(tri, x)
        except GeometryError:
            return None
        acn = Triangle.clockwise(tri.A, tri.C, n, 0.0)
        y = _circle_in(rng, acn, margin)
        if y is None:
            return None
        return LemmaInstance(lemma, tri, {"x": x, "y": y}, {"N": tuple(n)})
    raise ValueError(f"unknown lemma {lemma!r}")


def _circle_in(rng, tri: Triangle, margin: float) -> Circle | None:
    v = sample_triangle(rng, *tri.vertices, 1)[0]
    center = Point(float(v[0]), float(v[1]))
    room = tri.inner_distance(center) - margin
    if room <= margin:
        return None
    return Circle(center, float(rng.uniform(margin, room)))


# -- checks -------------------------------------------------------------------------------------

def check_lemma(inst: LemmaInstance, eps: float = DEFAULT_TOLERANCE, band: float = 1e-7) -> LemmaVerdict:
    checker = {
        "L4.2": _check_l42,
        "C4.3": _check_c43,
        "L4.4": _check_l44,
        "L4.5": _check_l45,
        "C4.6": _check_c46,
    }[inst.lemma]
    try:
        return checker(inst, eps, band)
    except GeometryError as exc:
        return LemmaVerdict(inst.lemma, REJECTED, {"reason": str(exc)})


def _hull_verdict(lemma: str, z: Circle, hull: list[Circle], eps: float, band: float) -> LemmaVerdict:
    if disc_in_hull(z, hull, eps):
        return LemmaVerdict(lemma, PASS)
    gap = hull_gap(z, hull)
    return LemmaVerdict(lemma, BAND if gap <= band else FAIL, {"gap": gap})


def _check_l42(inst, eps, band):
    tri, p, y = inst.tri, inst.circles["p"], inst.circles["y"]
    if _angle_depth(tri, y.center) < y.r - eps:
        return LemmaVerdict(inst.lemma, REJECTED, {"reason": "y leaves the angle"})
    if not disc_meets_region(y, corner_region(tri.A, p, W1), eps):
        return LemmaVerdict(inst.lemma, REJECTED, {"reason": "y does not meet w1"})
    return _hull_verdict(inst.lemma, y, [p, Circle(tri.A, 0.0)], eps, band)


def _check_c43(inst, eps, band):
    tri, p, y = inst.tri, inst.circles["p"], inst.circles["y"]
    if not tri.contains_disc(y, eps) or not tri.contains_disc(p, eps):
        return LemmaVerdict(inst.lemma, REJECTED, {"reason": "circle leaves the triangle"})
    w1 = corner_region(tri.A, p, W1)
    w2 = far_region(tri, tri.A, p)
    m1 = disc_meets_region(y, w1, eps)
    m2 = disc_meets_region(y, w2, eps)
    if not (m1 and m2):
        return LemmaVerdict(inst.lemma, PASS if (m1 or m2) else VACUOUS, {"w1": m1, "w2": m2})
    # meeting both is only a failure if y escapes CHull(p + A) by more than the band
    gap = hull_gap(y, [p, Circle(tri.A, 0.0)])
    return LemmaVerdict(inst.lemma, BAND if gap <= band else FAIL, {"w1": m1, "w2": m2, "gap": gap})


def _arc_point(s: Circle, t1: Point, t2: Point, frac: float, near: bool) -> Point:
    """Point at fraction ``frac`` along the minor (near) or major (far) arc t1->t2."""
    a1 = math.atan2(t1.y - s.center.y, t1.x - s.center.x)
    a2 = math.atan2(t2.y - s.center.y, t2.x - s.center.x)
    sweep = (a2 - a1) % (2 * math.pi)
    minor = sweep if sweep <= math.pi else sweep - 2 * math.pi
    span = minor if near else (minor - math.copysign(2 * math.pi, minor))
    theta = a1 + span * (0.02 + 0.96 * frac)
    return s.center + unit(theta).scale(s.r)


def _check_l44(inst, eps, band):
    tri, s = inst.tri, inst.circles["s"]
    t1, t2 = tangent_points(tri.A, s, eps)
    u = _arc_point(s, t1, t2, inst.params["near"], near=True)
    v = _arc_point(s, t1, t2, inst.params["far"], near=False)
    du = Point(-(u.y - s.center.y), u.x - s.center.x)
    dv = Point(-(v.y - s.center.y), v.x - s.center.x)
    if abs(cross(_unit(du), _unit(dv))) < 1e-6:
        return LemmaVerdict(inst.lemma, REJECTED, {"reason": "tangents nearly parallel"})
    o = intersect_lines(Line(u, _unit(du)), Line(v, _unit(dv)))
    depth = _angle_depth(tri, o)
    if depth <= eps * max(1.0, norm(o - tri.A)):
        return LemmaVerdict(inst.lemma, PASS, {"point": list(o), "depth": depth})
    return LemmaVerdict(inst.lemma, BAND if depth <= band else FAIL, {"point": list(o), "depth": depth})


def _check_l45(inst, eps, band):
    tri, x = inst.tri, inst.circles["x"]
    reg = wn_region(tri, x, eps)
    b = Circle(tri.B, 0.0)
    rng = np.random.default_rng(0)
    want = int(inst.params.get("samples", 1000))
    pts = sample_triangle(rng, reg.apex, reg.touch1, reg.touch2, 4 * want)
    outside = np.hypot(pts[:, 0] - x.center.x, pts[:, 1] - x.center.y) > x.r
    pts = pts[outside][:want]
    inside = points_in_disc_apex_hull(pts, x, tri.B)
    exact = point_in_hull(reg.apex, [x, b], eps)
    detail = {"samples": int(len(pts)), "sample_misses": int((~inside).sum()), "N": list(reg.apex)}
    if exact and inside.all():
        return LemmaVerdict(inst.lemma, PASS, detail)
    gap = hull_gap(Circle(reg.apex, 0.0), [x, b])
    return LemmaVerdict(inst.lemma, BAND if gap <= band else FAIL, {**detail, "gap": gap})


def _check_c46(inst, eps, band):
    tri, x, y = inst.tri, inst.circles["x"], inst.circles["y"]
    n = lemma_acn_point(tri, x)
    acn = Triangle.clockwise(tri.A, tri.C, n, 0.0)
    if acn.inner_distance(y.center) < y.r - eps or not tri.contains_disc(x, -eps):
        return LemmaVerdict(inst.lemma, REJECTED, {"reason": "y is not inside ACN"})
    held = sufficient_conditions(tri, x, y, eps)
    if not held:
        return LemmaVerdict(inst.lemma, VACUOUS, {"conditions": []})
    v = _hull_verdict(inst.lemma, y, [x, Circle(tri.A, 0.0), Circle(tri.C, 0.0)], eps, band)
    return LemmaVerdict(inst.lemma, v.status, {**v.detail, "conditions": list(held)})


__all__ = [
    "LEMMAS", "LemmaInstance", "LemmaVerdict", "check_lemma", "generate", "inscribed_in_angle",
    "wn_region", "W1", "W2", "WN",
]
