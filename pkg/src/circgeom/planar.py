"""Planar primitives shared by the disc kernel and the triangle taxonomy."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple


class GeometryError(ValueError):
    """Raised when a construction's geometric precondition does not hold."""


class Point(NamedTuple):
    x: float
    y: float

    def __add__(self, other):  # type: ignore[override]
        return Point(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Point(self.x - other[0], self.y - other[1])

    def scale(self, k: float) -> Point:
        return Point(self.x * k, self.y * k)


class Circle(NamedTuple):
    """A closed disc; ``r == 0`` is a point-circle."""

    center: Point
    r: float

    @classmethod
    def at(cls, x: float, y: float, r: float = 0.0) -> Circle:
        if r < 0 or not math.isfinite(r):
            raise GeometryError(f"radius must be finite and >= 0, got {r}")
        if not (math.isfinite(x) and math.isfinite(y)):
            raise GeometryError(f"center must be finite, got ({x}, {y})")
        return cls(Point(float(x), float(y)), float(r))

    @classmethod
    def point(cls, p) -> Circle:
        return cls(Point(float(p[0]), float(p[1])), 0.0)


class Line(NamedTuple):
    """Line through ``point`` with unit ``direction``."""

    point: Point
    direction: Point

    def normal(self) -> Point:
        return Point(-self.direction.y, self.direction.x)

    def signed_distance(self, p) -> float:
        """Positive on the left of the direction of travel."""
        return cross(self.direction, (p[0] - self.point.x, p[1] - self.point.y))


def dot(a, b) -> float:
    return a[0] * b[0] + a[1] * b[1]


def cross(a, b) -> float:
    return a[0] * b[1] - a[1] * b[0]


def norm(a) -> float:
    return math.hypot(a[0], a[1])


def unit(theta: float) -> Point:
    return Point(math.cos(theta), math.sin(theta))


def orient(a, b, c) -> float:
    """Twice the signed area of (a, b, c); negative when clockwise."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def line_through(p, q) -> Line:
    d = (q[0] - p[0], q[1] - p[1])
    length = norm(d)
    if length == 0:
        raise GeometryError("line through coincident points")
    return Line(Point(p[0], p[1]), Point(d[0] / length, d[1] / length))


def intersect_lines(l1: Line, l2: Line, eps: float = 1e-12) -> Point:
    denom = cross(l1.direction, l2.direction)
    if abs(denom) <= eps:
        raise GeometryError("lines are parallel")
    w = (l2.point.x - l1.point.x, l2.point.y - l1.point.y)
    s = cross(w, l2.direction) / denom
    return Point(l1.point.x + s * l1.direction.x, l1.point.y + s * l1.direction.y)


def line_param(start, end, through, toward) -> float:
    """Parameter ``t`` where line (through, toward) meets segment start->end.

    ``t = 0`` at ``start`` and ``t = 1`` at ``end``.
    """
    e = (end[0] - start[0], end[1] - start[1])
    d = (toward[0] - through[0], toward[1] - through[1])
    denom = cross(e, d)
    if denom == 0:
        raise GeometryError("line parallel to side")
    w = (through[0] - start[0], through[1] - start[1])
    return cross(w, d) / denom


@dataclass(frozen=True)
class Triangle:
    """Triangle with vertices stored in clockwise order."""

    A: Point
    B: Point
    C: Point

    @classmethod
    def clockwise(cls, a, b, c, eps: float = 1e-9) -> Triangle:
        a, b, c = Point(*map(float, a)), Point(*map(float, b)), Point(*map(float, c))
        area2 = orient(a, b, c)
        if abs(area2) <= 2 * eps:
            raise GeometryError("degenerate triangle")
        # reorder, never reflect: keep A and swap the other two
        if area2 > 0:
            b, c = c, b
        return cls(a, b, c)

    @property
    def vertices(self) -> tuple[Point, Point, Point]:
        return (self.A, self.B, self.C)

    @property
    def area(self) -> float:
        return abs(orient(self.A, self.B, self.C)) / 2

    def sides(self) -> tuple[tuple[str, Point, Point, Point], ...]:
        """(name, start, end, opposite vertex) along the clockwise walk."""
        return (
            ("AB", self.A, self.B, self.C),
            ("BC", self.B, self.C, self.A),
            ("CA", self.C, self.A, self.B),
        )

    def rotated(self) -> Triangle:
        """Relabel (A, B, C) -> (B, C, A)."""
        return Triangle(self.B, self.C, self.A)

    def inner_distance(self, p) -> float:
        """Smallest signed distance from ``p`` to the side lines, positive inside."""
        best = math.inf
        for _, s, e, _ in self.sides():
            length = norm((e[0] - s[0], e[1] - s[1]))
            # clockwise walk keeps the interior on the right
            d = -orient(s, e, p) / length
            best = min(best, d)
        return best

    def contains_point(self, p, eps: float = 0.0) -> bool:
        return self.inner_distance(p) >= -eps

    def contains_disc(self, c: Circle, eps: float = 0.0) -> bool:
        return self.inner_distance(c.center) >= c.r - eps


def triangle_contains(a, b, c, p, eps: float = 0.0) -> bool:
    """Closed membership of ``p`` in triangle (a, b, c), any orientation."""
    o = orient(a, b, c)
    if o == 0:
        return False
    sgn = 1.0 if o > 0 else -1.0
    for s, e in ((a, b), (b, c), (c, a)):
        length = norm((e[0] - s[0], e[1] - s[1])) or 1.0
        if sgn * orient(s, e, p) / length < -eps:
            return False
    return True
