"""Two circles inside a triangle: side projections, codes and classes.

Each circle is projected from the opposite vertex onto every side.  On a side
walked clockwise the two intervals ``(x1, x2)`` and ``(y1, y2)`` interleave in
one of six ways, giving a side code; the three codes for AB, BC, CA form the
configuration code ``C_jkl``.  Codes are grouped into 38 classes under side
rotation and exchange of the two circles.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .closure import CarouselVerdict
from .discs import DEFAULT_TOLERANCE, disc_in_hull, tangent_points
from .planar import Circle, GeometryError, Point, Triangle, intersect_lines, line_param, line_through

SIDES = ("AB", "BC", "CA")
SWAP = {1: 2, 2: 1, 3: 4, 4: 3, 5: 6, 6: 5}

# class lists transcribed from the published table, in its order
CLASS_FIXTURE: dict[str, tuple[str, ...]] = {
    "S1": ("121", "122", "112", "221", "211", "212"),
    "S2": ("111", "222"),
    "S3": ("123", "142", "214", "231", "312", "421"),
    "S4": ("124", "132", "213", "241", "321", "412"),
    "S5": ("113", "131", "224", "242", "311", "422"),
    "S6": ("114", "141", "223", "232", "322", "411"),
    "S7": ("125", "162", "216", "251", "512", "621"),
    "S8": ("126", "152", "215", "261", "521", "612"),
    "S9": ("115", "151", "226", "262", "511", "622"),
    "S10": ("116", "161", "225", "252", "522", "611"),
    "S11": ("133", "244", "313", "331", "424", "442"),
    "S12": ("134", "243", "324", "341", "413", "432"),
    "S13": ("143", "234", "314", "342", "423", "431"),
    "S14": ("144", "233", "323", "332", "414", "441"),
    "S15": ("135", "246", "351", "462", "513", "624"),
    "S16": ("136", "245", "361", "452", "524", "613"),
    "S17": ("145", "236", "362", "451", "514", "623"),
    "S18": ("146", "235", "352", "461", "523", "614"),
    "S19": ("163", "254", "316", "425", "542", "631"),
    "S20": ("164", "253", "325", "416", "532", "641"),
    "S21": ("153", "264", "315", "426", "531", "642"),
    "S22": ("154", "263", "326", "415", "541", "632"),
    "S23": ("165", "256", "516", "562", "625", "651"),
    "S24": ("166", "255", "525", "552", "616", "661"),
    "S25": ("155", "266", "551", "515", "626", "662"),
    "S26": ("156", "265", "526", "561", "615", "652"),
    "S27": ("333", "444"),
    "S28": ("334", "343", "344", "433", "434", "443"),
    "S29": ("335", "353", "446", "464", "533", "644"),
    "S30": ("336", "363", "445", "454", "544", "633"),
    "S31": ("345", "364", "436", "453", "534", "643"),
    "S32": ("346", "354", "435", "463", "543", "634"),
    "S33": ("365", "456", "536", "564", "645", "653"),
    "S34": ("366", "455", "545", "554", "663", "636"),
    "S35": ("355", "466", "535", "553", "646", "664"),
    "S36": ("356", "465", "546", "563", "635", "654"),
    "S37": ("565", "556", "566", "655", "656", "665"),
    "S38": ("555", "666"),
}

REALIZABLE = frozenset(
    f"S{n}" for n in (1, 3, 4, 7, 8, 11, 14, 16, 18, 19, 20, 23, 24, 26, 27, 29, 30, 33, 36, 37)
)

# sufficient conditions (1)-(4) stated for the first member of each realized class
CONDITION_TABLE: dict[str, tuple[int, ...]] = {
    "121": (1, 3, 4),
    "123": (3, 4),
    "125": (1, 3),
    "133": (4,),
    "136": (2,),
    "163": (3,),
    "165": (1, 3),
    "335": (1,),
    "365": (1, 3),
    "565": (1, 3),
}


class DegenerateConfiguration(GeometryError):
    """Projection endpoints coincide within tolerance; no code is defined."""


Code = tuple[int, int, int]


def parse_code(text: str) -> Code:
    digits = text.replace("C", "").replace("_", "").strip("{}")
    if len(digits) != 3 or any(d not in "123456" for d in digits):
        raise ValueError(f"not a configuration code: {text!r}")
    return tuple(int(d) for d in digits)  # type: ignore[return-value]


def code_str(code: Code) -> str:
    return "".join(map(str, code))


def rotate(code: Code) -> Code:
    j, k, l = code
    return (k, l, j)


def swap(code: Code) -> Code:
    return tuple(SWAP[i] for i in code)  # type: ignore[return-value]


@dataclass(frozen=True)
class ClassInfo:
    name: str
    members: tuple[str, ...]
    realizable: bool

    @property
    def number(self) -> int:
        return int(self.name[1:])


def _orbits() -> list[frozenset[Code]]:
    seen: set[Code] = set()
    out = []
    for code in itertools.product(range(1, 7), repeat=3):
        if code in seen:
            continue
        orbit = set()
        frontier = [code]
        while frontier:
            c = frontier.pop()
            if c in orbit:
                continue
            orbit.add(c)
            frontier.extend([rotate(c), swap(c)])
        seen |= orbit
        out.append(frozenset(orbit))
    return out


_CLASS_TABLE: dict[str, ClassInfo] | None = None
_CLASS_OF: dict[Code, str] = {}


def class_table() -> dict[str, ClassInfo]:
    """All 38 classes, computed as orbits and matched against the fixture."""
    global _CLASS_TABLE
    if _CLASS_TABLE is not None:
        return _CLASS_TABLE
    fixture = {frozenset(parse_code(c) for c in members): name for name, members in CLASS_FIXTURE.items()}
    orbits = _orbits()
    if len(orbits) != 38 or set(orbits) != set(fixture):
        raise AssertionError("computed code classes differ from the class fixture")
    table = {}
    for orbit in orbits:
        name = fixture[orbit]
        table[name] = ClassInfo(name, CLASS_FIXTURE[name], name in REALIZABLE)
        for c in orbit:
            _CLASS_OF[c] = name
    _CLASS_TABLE = dict(sorted(table.items(), key=lambda kv: int(kv[0][1:])))
    return _CLASS_TABLE


def class_of(code: Code | str) -> str:
    if isinstance(code, str):
        code = parse_code(code)
    class_table()
    return _CLASS_OF[code]


def class_table_json() -> dict:
    return {
        "classes": [
            {"name": c.name, "members": [f"C{m}" for m in c.members], "realizable": c.realizable}
            for c in class_table().values()
        ]
    }


# -- projections --------------------------------------------------------------------

@dataclass(frozen=True)
class SideProjection:
    side: str
    x1: float
    x2: float
    y1: float
    y2: float


def project(tri: Triangle, c: Circle, margin: float = 0.0) -> dict[str, tuple[float, float]]:
    """Projection interval of ``c`` on each side, as parameters along the
    clockwise walk (0 at the side's first vertex)."""
    if not tri.contains_disc(c, -margin) or tri.inner_distance(c.center) <= c.r:
        raise GeometryError("circle is not strictly inside the triangle")
    out = {}
    for name, start, end, opposite in tri.sides():
        t1, t2 = tangent_points(opposite, c, 0.0)
        a = line_param(start, end, opposite, t1)
        b = line_param(start, end, opposite, t2)
        out[name] = (min(a, b), max(a, b))
    return out


def side_code(p: SideProjection, eps: float = DEFAULT_TOLERANCE) -> int:
    x1, x2, y1, y2 = p.x1, p.x2, p.y1, p.y2
    ends = sorted((x1, x2, y1, y2))
    if min(b - a for a, b in zip(ends, ends[1:])) <= eps:
        raise DegenerateConfiguration(f"coincident projection endpoints on side {p.side}")
    if y2 < x1:
        return 1
    if x2 < y1:
        return 2
    if x1 < y1 and y2 < x2:
        return 3
    if y1 < x1 and x2 < y2:
        return 4
    if y1 < x1 < y2 < x2:
        return 5
    return 6


def side_projections(tri: Triangle, x: Circle, y: Circle) -> tuple[SideProjection, ...]:
    px, py = project(tri, x), project(tri, y)
    return tuple(SideProjection(s, *px[s], *py[s]) for s in SIDES)


def config_code(tri: Triangle, x: Circle, y: Circle, eps: float = DEFAULT_TOLERANCE) -> Code:
    return tuple(side_code(p, eps) for p in side_projections(tri, x, y))  # type: ignore[return-value]


def sufficient_conditions(tri: Triangle, x: Circle, y: Circle, eps: float = DEFAULT_TOLERANCE) -> tuple[int, ...]:
    """Which of the four endpoint comparisons hold (strictly, beyond ``eps``).

    (1) y's endpoint on CA nearest C is nearer C than x's;
    (2) the same on CA nearest A; (3) on BC nearest C; (4) on AB nearest A.
    """
    px, py = project(tri, x), project(tri, y)
    held = []
    if py["CA"][0] < px["CA"][0] - eps:
        held.append(1)
    if py["CA"][1] > px["CA"][1] + eps:
        held.append(2)
    if py["BC"][1] > px["BC"][1] + eps:
        held.append(3)
    if py["AB"][0] < px["AB"][0] - eps:
        held.append(4)
    return tuple(held)


def relabel(tri: Triangle, x: Circle, y: Circle, target: Code | str,
            eps: float = DEFAULT_TOLERANCE) -> tuple[Triangle, Circle, Circle]:
    """Rotate the vertex labels and/or exchange the circles so the scene
    carries exactly ``target``, which must lie in the scene's class."""
    if isinstance(target, str):
        target = parse_code(target)
    t = tri
    for _ in range(3):
        for a, b in ((x, y), (y, x)):
            if config_code(t, a, b, eps) == target:
                return t, a, b
        t = t.rotated()
    raise ValueError(f"scene cannot be relabelled to C{code_str(target)}")


# -- vectorized sampling ----------------------------------------------------------------

def _orient_np(a, b, c):
    return (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0])


def sample_triangles(rng: np.random.Generator, size: int, min_area: float = 0.1) -> np.ndarray:
    """``(size, 3, 2)`` clockwise triangles with vertices in the unit box."""
    out = []
    have = 0
    while have < size:
        v = rng.random((2 * size, 3, 2))
        area2 = _orient_np(v[:, 0], v[:, 1], v[:, 2])
        keep = np.abs(area2) >= 2 * min_area
        v, area2 = v[keep], area2[keep]
        ccw = area2 > 0
        v[ccw, 1], v[ccw, 2] = v[ccw, 2].copy(), v[ccw, 1].copy()
        out.append(v)
        have += len(v)
    return np.concatenate(out)[:size]


def inner_distance_np(tri: np.ndarray, p: np.ndarray) -> np.ndarray:
    best = np.full(len(p), np.inf)
    for i in range(3):
        s, e = tri[:, i], tri[:, (i + 1) % 3]
        length = np.hypot(*(e - s).T)
        best = np.minimum(best, -_orient_np(s, e, p) / length)
    return best


def _uniform_in(rng, tri: np.ndarray) -> np.ndarray:
    u = rng.random(len(tri))
    v = rng.random(len(tri))
    flip = u + v > 1
    u[flip], v[flip] = 1 - u[flip], 1 - v[flip]
    return tri[:, 0] + u[:, None] * (tri[:, 1] - tri[:, 0]) + v[:, None] * (tri[:, 2] - tri[:, 0])


def sample_pairs(rng: np.random.Generator, size: int, margin: float = 1e-3):
    """Random triangles with two discs kept ``margin`` inside.

    The second disc is drawn independently, near the first, or inside it, in
    equal proportions, so that nested and overlapping codes are all reached.
    """
    tri = sample_triangles(rng, size)
    cx = _uniform_in(rng, tri)
    dx = inner_distance_np(tri, cx) - margin
    rx = rng.random(size) ** 1.5 * np.maximum(dx, 0)

    mode = rng.integers(0, 3, size)
    cy = _uniform_in(rng, tri)
    ang = rng.random(size) * 2 * np.pi
    dist = rx * (0.5 + 1.5 * rng.random(size))
    near = cx + np.stack([np.cos(ang), np.sin(ang)], axis=1) * dist[:, None]
    cy[mode == 1] = near[mode == 1]
    inside = cx + np.stack([np.cos(ang), np.sin(ang)], axis=1) * (rx * rng.random(size))[:, None]
    cy[mode == 2] = inside[mode == 2]
    dy = inner_distance_np(tri, cy) - margin
    ry = rng.random(size) ** 1.5 * np.maximum(dy, 0)
    shrink = mode == 2
    ry[shrink] = np.minimum(ry[shrink], rx[shrink] * rng.random(shrink.sum()))
    ok = (dx > 0) & (dy > 0) & (rx > margin) & (ry > margin)
    return tri[ok], cx[ok], rx[ok], cy[ok], ry[ok]


def project_np(tri: np.ndarray, c: np.ndarray, r: np.ndarray) -> np.ndarray:
    """``(n, 3, 2)`` projection intervals for sides AB, BC, CA."""
    out = np.empty((len(tri), 3, 2))
    for i in range(3):
        s, e, w = tri[:, i], tri[:, (i + 1) % 3], tri[:, (i + 2) % 3]
        to_c = c - w
        d = np.hypot(*to_c.T)
        phi = np.arctan2(to_c[:, 1], to_c[:, 0])
        alpha = np.arcsin(np.clip(r / d, 0, 1))
        ts = []
        for sgn in (1.0, -1.0):
            dirn = np.stack([np.cos(phi + sgn * alpha), np.sin(phi + sgn * alpha)], axis=1)
            edge = e - s
            den = edge[:, 0] * dirn[:, 1] - edge[:, 1] * dirn[:, 0]
            ws = w - s
            ts.append((ws[:, 0] * dirn[:, 1] - ws[:, 1] * dirn[:, 0]) / den)
        out[:, i, 0] = np.minimum(*ts)
        out[:, i, 1] = np.maximum(*ts)
    return out


def codes_np(px: np.ndarray, py: np.ndarray, eps: float = DEFAULT_TOLERANCE) -> tuple[np.ndarray, np.ndarray]:
    """Side codes ``(n, 3)`` and a per-scene degenerate flag."""
    x1, x2, y1, y2 = px[..., 0], px[..., 1], py[..., 0], py[..., 1]
    ends = np.sort(np.stack([x1, x2, y1, y2], axis=-1), axis=-1)
    degenerate = (np.diff(ends, axis=-1).min(axis=-1) <= eps).any(axis=-1)
    code = np.full(x1.shape, 6)
    code[(y1 < x1) & (x1 < y2) & (y2 < x2)] = 5
    code[(y1 < x1) & (x2 < y2)] = 4
    code[(x1 < y1) & (y2 < x2)] = 3
    code[x2 < y1] = 2
    code[y2 < x1] = 1
    return code, degenerate


def class_index_np(codes: np.ndarray) -> np.ndarray:
    """Class number (1..38) for each row of side codes."""
    class_table()
    lut = np.zeros((7, 7, 7), dtype=int)
    for c, name in _CLASS_OF.items():
        lut[c] = int(name[1:])
    return lut[codes[:, 0], codes[:, 1], codes[:, 2]]


def _scene_from_arrays(tri, cx, rx, cy, ry, i) -> tuple[Triangle, Circle, Circle]:
    t = Triangle(*(Point(float(v[0]), float(v[1])) for v in tri[i]))
    return t, Circle.at(cx[i, 0], cx[i, 1], rx[i]), Circle.at(cy[i, 0], cy[i, 1], ry[i])


def search_realization(class_name: str, budget: int = 100_000, seed: int = 0,
                       margin: float = 1e-3, eps: float = DEFAULT_TOLERANCE,
                       batch: int = 8192) -> tuple[Triangle, Circle, Circle] | None:
    """Randomized search for a scene whose configuration falls in the class.

    Returns ``None`` when ``budget`` sampled scenes contain no witness.
    Candidates are re-classified with the scalar kernel before returning.
    """
    target = int(class_name.lstrip("S"))
    for tri, cx, rx, cy, ry in _batches(seed, budget, margin, batch):
        codes, degenerate = codes_np(project_np(tri, cx, rx), project_np(tri, cy, ry), eps)
        hit = np.flatnonzero((class_index_np(codes) == target) & ~degenerate)
        for i in hit:
            scene = _scene_from_arrays(tri, cx, rx, cy, ry, i)
            try:
                if class_of(config_code(*scene, eps)) == class_name:
                    return scene
            except GeometryError:
                continue
    return None


def _batches(seed: int, budget: int, margin: float, batch: int) -> Iterator[tuple]:
    used = 0
    index = 0
    while used < budget:
        rng = np.random.default_rng([seed, index])
        tri, cx, rx, cy, ry = sample_pairs(rng, min(batch, budget - used), margin)
        used += min(batch, budget - used)
        index += 1
        yield tri, cx, rx, cy, ry


def observed_classes(budget: int, seed: int = 0, margin: float = 1e-3,
                     eps: float = DEFAULT_TOLERANCE, batch: int = 8192) -> dict[str, int]:
    """Histogram of classes over ``budget`` sampled scenes."""
    hist: dict[str, int] = {}
    for tri, cx, rx, cy, ry in _batches(seed, budget, margin, batch):
        codes, degenerate = codes_np(project_np(tri, cx, rx), project_np(tri, cy, ry), eps)
        idx = class_index_np(codes)[~degenerate]
        for k, v in zip(*np.unique(idx, return_counts=True)):
            hist[f"S{k}"] = hist.get(f"S{k}", 0) + int(v)
    return dict(sorted(hist.items(), key=lambda kv: int(kv[0][1:])))


def sample_scene(rng: np.random.Generator, margin: float = 1e-3) -> tuple[Triangle, Circle, Circle]:
    """One random triangle with two discs inside, drawn like :func:`sample_pairs`."""
    while True:
        tri, cx, rx, cy, ry = sample_pairs(rng, 4, margin)
        if len(tri):
            return _scene_from_arrays(tri, cx, rx, cy, ry, 0)


def coincident_scene(rng: np.random.Generator, case: int, margin: float = 1e-3,
                     tries: int = 100) -> tuple[Triangle, Circle, Circle] | None:
    """Scene where x and y share a tangent line through a vertex.

    Case 1 puts both discs on the same side of that line, case 2 on opposite
    sides.  Either way one projection endpoint of x and y coincides.
    """
    for _ in range(tries):
        tri, x, _ = sample_scene(rng, margin)
        v = tri.vertices[int(rng.integers(3))]
        t = tangent_points(v, x, 0.0)[int(rng.integers(2))]
        d = t - v
        length = math.hypot(*d)
        normal = Point(-d.y / length, d.x / length)
        if normal.x * (x.center.x - t.x) + normal.y * (x.center.y - t.y) < 0:
            normal = normal.scale(-1.0)
        if case == 2:
            normal = normal.scale(-1.0)
        foot = v + d.scale(float(rng.uniform(0.2, 1.8)))
        r = float(rng.uniform(margin, 0.2))
        y = Circle(foot + normal.scale(r), r)
        if not is_inside_strict(tri, y, margin):
            continue
        if math.hypot(*(y.center - x.center)) < 1e-9:
            continue
        return tri, x, y
    return None


# -- carousel property for triangles ------------------------------------------------------

VERTEX_PAIRS = (("A", "B"), ("B", "C"), ("A", "C"))


def weak_carousel_triangle(x: Circle, y: Circle, tri: Triangle,
                           eps: float = DEFAULT_TOLERANCE) -> CarouselVerdict:
    """Test the six alternatives x in ch_c(y,U,V), y in ch_c(x,U,V)."""
    verts = {"A": Circle(tri.A, 0.0), "B": Circle(tri.B, 0.0), "C": Circle(tri.C, 0.0)}
    corners = list(verts.values())
    for c in (x, y):
        if not disc_in_hull(c, corners, eps):
            raise GeometryError("circle is not inside the triangle")
    tried = {}
    for u, v in VERTEX_PAIRS:
        pair = [verts[u], verts[v]]
        if disc_in_hull(y, [x, *pair], eps):
            return CarouselVerdict("weak-triangle", True, {"member": "y", "with": ["x", u, v]}, None, 1)
        if disc_in_hull(x, [y, *pair], eps):
            return CarouselVerdict("weak-triangle", True, {"member": "x", "with": ["y", u, v]}, None, 1)
        tried[u + v] = {"y_in_hull_of_x": False, "x_in_hull_of_y": False}
    return CarouselVerdict("weak-triangle", False, None, {"x": "x", "y": "y", "S": ["A", "B", "C"], "closures": tried}, 1)


def lemma_acn_point(tri: Triangle, x: Circle) -> Point:
    """Intersection N of the tangents A->x_B^{BC} and C->x_B^{AB}."""
    px = project(tri, x)
    foot_bc = _side_point(tri.B, tri.C, px["BC"][0])
    foot_ab = _side_point(tri.A, tri.B, px["AB"][1])
    return intersect_lines(line_through(tri.A, foot_bc), line_through(tri.C, foot_ab), 1e-12)


def _side_point(s: Point, e: Point, t: float) -> Point:
    return Point(s.x + t * (e.x - s.x), s.y + t * (e.y - s.y))


@dataclass(frozen=True)
class LemmaOutcome:
    lemma: str
    status: str  # "pass", "fail", "rejected" or "vacuous"
    detail: dict

    @property
    def ok(self) -> bool:
        return self.status != "fail"


def check_lemma_acn(tri: Triangle, x: Circle, y: Circle, eps: float = DEFAULT_TOLERANCE) -> LemmaOutcome:
    """y lies in triangle ACN whenever j in {1,3,5} and k in {2,3,6}."""
    try:
        j, k, _ = config_code(tri, x, y, eps)
    except GeometryError as exc:
        return LemmaOutcome("ACN", "rejected", {"reason": str(exc)})
    if j not in (1, 3, 5) or k not in (2, 3, 6):
        return LemmaOutcome("ACN", "rejected", {"reason": f"code C{j}{k}* outside the hypothesis"})
    try:
        n = lemma_acn_point(tri, x)
    except GeometryError as exc:
        return LemmaOutcome("ACN", "rejected", {"reason": str(exc)})
    acn = Triangle.clockwise(tri.A, tri.C, n, 0.0)
    slack = acn.inner_distance(y.center) - y.r
    status = "pass" if slack >= -eps else "fail"
    return LemmaOutcome("ACN", status, {"N": list(n), "slack": slack})


def canonical_member(class_name: str) -> str:
    return class_table()[class_name].members[0]


def format_code(code: Code) -> str:
    return f"C_{{{code_str(code)}}}"


def format_class(name: str) -> str:
    return f"S_{name[1:]}"


def is_inside_strict(tri: Triangle, c: Circle, margin: float) -> bool:
    return tri.inner_distance(c.center) - c.r > margin


def distance(p, q) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])
