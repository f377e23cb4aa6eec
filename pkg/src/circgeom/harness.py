"""Seeded verification campaigns.

Every campaign derives its randomness per trial from ``(seed, index)`` so a
report depends only on its parameters and reports from disjoint index ranges
merge into the same result as one long run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import closure as cl
from .discs import DEFAULT_TOLERANCE, Scene, disc_in_hull, point_in_hull, scene_alignment, tangent_triangle
from .lemmas import BAND, FAIL, LEMMAS, PASS, REJECTED, VACUOUS, check_lemma, generate
from .planar import Circle, GeometryError, Point, Triangle
from .triangles import (
    DegenerateConfiguration,
    class_of,
    coincident_scene,
    config_code,
    relabel,
    sample_scene,
    search_realization,
    weak_carousel_triangle,
)

COINCIDENT_SHARE = 0.1
COINCIDENT = "coincident"


@dataclass(frozen=True)
class FuzzParams:
    trials: int
    seed: int
    margin: float = 1e-3
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise cl.InputError("trials must be positive")
        if not (self.margin > self.tolerance > 0):
            raise cl.InputError("need margin > tolerance > 0")

    def to_json(self) -> dict:
        return {"trials": self.trials, "seed": self.seed, "margin": self.margin, "tolerance": self.tolerance}


@dataclass
class FuzzReport:
    params: FuzzParams
    trials_run: int = 0
    accepted: int = 0
    rejected_degenerate: int = 0
    violations: list[dict] = field(default_factory=list)
    histogram: dict[str, int] = field(default_factory=dict)
    extra: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def bump(self, key: str, table: str = "histogram") -> None:
        d = getattr(self, table)
        d[key] = d.get(key, 0) + 1

    def merge(self, other: FuzzReport) -> FuzzReport:
        out = FuzzReport(self.params)
        out.trials_run = self.trials_run + other.trials_run
        out.accepted = self.accepted + other.accepted
        out.rejected_degenerate = self.rejected_degenerate + other.rejected_degenerate
        out.violations = sorted(self.violations + other.violations, key=lambda v: v["trial"])
        for name in ("histogram", "extra"):
            merged = dict(getattr(self, name))
            for k, v in getattr(other, name).items():
                merged[k] = merged.get(k, 0) + v
            setattr(out, name, merged)
        return out

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "counts": {
                "trials_run": self.trials_run,
                "accepted": self.accepted,
                "rejected_degenerate": self.rejected_degenerate,
                "violations": len(self.violations),
                **dict(sorted(self.extra.items())),
            },
            "violations": self.violations,
            "histogram": dict(sorted(self.histogram.items(), key=_hist_key)),
        }


def _hist_key(kv):
    k = kv[0]
    return (0, int(k[1:])) if k.startswith("S") and k[1:].isdigit() else (1, k)


def scene_json(circles: dict[str, Circle], tri: Triangle | None = None,
               tolerance: float = DEFAULT_TOLERANCE, **extra) -> dict:
    out: dict = {
        "tolerance": tolerance,
        "circles": [{"name": k, "c": [c.center.x, c.center.y], "r": c.r} for k, c in circles.items()],
    }
    if tri is not None:
        out["triangle"] = [[v.x, v.y] for v in tri.vertices]
    out.update(extra)
    return out


def trial_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed & (2**64 - 1), index])


# -- weak carousel for two circles in a triangle ------------------------------------------

def theorem1_trial(p: FuzzParams, index: int, report: FuzzReport) -> None:
    rng = trial_rng(p.seed, index)
    report.trials_run += 1
    if rng.random() < COINCIDENT_SHARE:
        scene = coincident_scene(rng, 1 + int(rng.integers(2)), p.margin)
    else:
        scene = sample_scene(rng, p.margin)
    if scene is None:
        report.rejected_degenerate += 1
        return
    tri, x, y = scene
    try:
        verdict = weak_carousel_triangle(x, y, tri, p.tolerance)
    except GeometryError:
        report.rejected_degenerate += 1
        return
    report.accepted += 1
    try:
        key = class_of(config_code(tri, x, y, p.tolerance))
    except DegenerateConfiguration:
        key = COINCIDENT
    report.bump(key)
    if not verdict.holds:
        report.violations.append(scene_json({"x": x, "y": y}, tri, p.tolerance, trial=index, check="theorem1"))


def fuzz_theorem1(p: FuzzParams, start: int = 0) -> FuzzReport:
    report = FuzzReport(p)
    for i in range(start, start + p.trials):
        theorem1_trial(p, i, report)
    return report


def recheck_theorem1(scene: Scene) -> bool:
    """Re-evaluate a stored scene; True when the property holds."""
    tri = scene.triangle
    if tri is None:
        raise cl.InputError("scene has no triangle")
    return weak_carousel_triangle(scene.circles["x"], scene.circles["y"], tri, scene.tolerance).holds


# -- weak 2x3 carousel for five circles ------------------------------------------------------

PAIRS = (("a", "b"), ("b", "c"), ("a", "c"))


def weak_2x3_holds(circles: dict[str, Circle], eps: float) -> tuple[bool, dict | None]:
    x, y = circles["x"], circles["y"]
    for u, v in PAIRS:
        pair = [circles[u], circles[v]]
        if disc_in_hull(x, [y, *pair], eps):
            return True, {"member": "x", "with": ["y", u, v]}
        if disc_in_hull(y, [x, *pair], eps):
            return True, {"member": "y", "with": ["x", u, v]}
    return False, None


def _max_radius(center: Point, hull: list[Circle], eps: float, cap: float) -> float:
    if not point_in_hull(center, hull, eps):
        return -1.0
    lo, hi = 0.0, cap
    for _ in range(40):
        mid = (lo + hi) / 2
        if disc_in_hull(Circle(center, mid), hull, eps):
            lo = mid
        else:
            hi = mid
    return lo


def sample_five(rng: np.random.Generator, margin: float, eps: float) -> dict[str, Circle]:
    """Circles a, b, c plus x, y drawn inside their hull.

    The centers of x and y are uniform in the triangle of the three centers
    (always inside the hull) and radii are a random fraction of the largest
    admissible one.  A small share of scenes put c inside the hull of a and b.
    """
    base = {k: Circle.at(*rng.random(2), float(rng.uniform(0.0, 0.15))) for k in "abc"}
    if rng.random() < 0.05:
        a, b = base["a"], base["b"]
        t = float(rng.random())
        mid = Point(a.center.x + t * (b.center.x - a.center.x), a.center.y + t * (b.center.y - a.center.y))
        base["c"] = Circle(mid, min(a.r, b.r) * float(rng.random()))
    hull = list(base.values())
    out = dict(base)
    for name in "xy":
        w = rng.dirichlet([1.0, 1.0, 1.0])
        center = Point(*(sum(wi * np.asarray(c.center) for wi, c in zip(w, hull))))
        rmax = _max_radius(center, hull, eps, 0.5) - margin
        if rmax <= 0:
            r = 0.0
        else:
            r = float(rng.random()) * rmax
        out[name] = Circle(center, r)
    return out


def _decomposition_probes(rng, circles: dict[str, Circle], eps: float, probes: int) -> tuple[int, int, int]:
    """Compare hull membership with triangle-minus-corners on random probes.

    Returns (agree, disagree, skipped); probes within 1e-7 of the hull
    boundary are skipped.
    """
    abc = [circles[k] for k in "abc"]
    tt = tangent_triangle(*abc, eps)
    agree = disagree = skipped = 0
    verts = np.array(tt.vertices)
    for _ in range(probes):
        w = rng.dirichlet([1.0, 1.0, 1.0])
        p = Point(*(w @ verts))
        robust_in = disc_in_hull(Circle(p, 1e-7), abc, 0.0)
        robust_out = not point_in_hull(p, abc, 1e-7)
        if robust_in == robust_out:
            skipped += 1
            continue
        if tt.hull_contains_point(p, 0.0) == robust_in:
            agree += 1
        else:
            disagree += 1
    return agree, disagree, skipped


def theorem2_trial(p: FuzzParams, index: int, report: FuzzReport, probes: int = 8) -> None:
    rng = trial_rng(p.seed, index)
    report.trials_run += 1
    circles = sample_five(rng, p.margin, p.tolerance)
    hull = [circles[k] for k in "abc"]
    if not all(disc_in_hull(circles[k], hull, p.tolerance) for k in "xy"):
        report.rejected_degenerate += 1
        return
    report.accepted += 1
    holds, _ = weak_2x3_holds(circles, p.tolerance)
    if any(disc_in_hull(circles[k], [circles[o] for o in "abc" if o != k], p.tolerance) for k in "abc"):
        report.bump("containment_shortcut", "extra")
    else:
        try:
            agree, disagree, skipped = _decomposition_probes(rng, circles, p.tolerance, probes)
        except GeometryError:
            report.bump("decomposition_undefined", "extra")
        else:
            report.extra["decomposition_probes"] = report.extra.get("decomposition_probes", 0) + agree + disagree
            report.extra["decomposition_band"] = report.extra.get("decomposition_band", 0) + skipped
            if disagree:
                report.violations.append(scene_json(circles, None, p.tolerance, trial=index,
                                                    check="decomposition", disagreements=disagree))
    if not holds:
        report.violations.append(scene_json(circles, None, p.tolerance, trial=index, check="theorem2"))


def fuzz_theorem2(p: FuzzParams, accepted_target: int | None = None, start: int = 0) -> FuzzReport:
    """Run ``p.trials`` trials, or until ``accepted_target`` scenes are accepted."""
    report = FuzzReport(p)
    i = start
    limit = start + (p.trials if accepted_target is None else max(p.trials, 100 * accepted_target))
    while i < limit:
        if accepted_target is not None and report.accepted >= accepted_target:
            break
        theorem2_trial(p, i, report)
        i += 1
    return report


def recheck_theorem2(scene: Scene) -> bool:
    return weak_2x3_holds(scene.circles, scene.tolerance)[0]


# -- lemma suite -----------------------------------------------------------------------------------

def lemma_suite(instances: int, seed: int, margin: float = 1e-3, eps: float = DEFAULT_TOLERANCE,
                lemmas: tuple[str, ...] = LEMMAS, max_draws: int | None = None) -> dict:
    """Check each lemma on ``instances`` generated instances where its
    conclusion is actually evaluated (vacuous and rejected ones do not count)."""
    out = {}
    for li, lemma in enumerate(lemmas):
        counts = {PASS: 0, FAIL: 0, BAND: 0, VACUOUS: 0, REJECTED: 0}
        failures = []
        draws = 0
        cap = max_draws or 20 * instances
        while counts[PASS] + counts[FAIL] + counts[BAND] < instances and draws < cap:
            rng = np.random.default_rng([seed, li, draws])
            draws += 1
            inst = generate(lemma, rng, margin)
            if inst is None:
                counts[REJECTED] += 1
                continue
            verdict = check_lemma(inst, eps)
            counts[verdict.status] += 1
            if verdict.status == FAIL:
                failures.append({"instance": inst.to_json(), "detail": verdict.detail})
        evaluated = counts[PASS] + counts[FAIL] + counts[BAND]
        out[lemma] = {"draws": draws, "evaluated": evaluated, "counts": counts, "failures": failures,
                      "ok": not failures and evaluated >= instances}
    return out


# -- closure-system suites -----------------------------------------------------------------------

def _check(name: str, ok: bool, **detail) -> dict:
    return {"name": name, "ok": bool(ok), **detail}


def counterexample_suite(k_max: int = 7, budget_seconds: float | None = 1800.0) -> dict:
    g_prime, g = cl.counterexample_geometries()
    checks = []
    checks.append(_check("G has 29 closed sets", len(g.sets) == 29, size=len(g.sets)))
    checks.append(_check("G' has 27 closed sets", len(g_prime.sets) == 27, size=len(g_prime.sets)))
    ax = cl.verify_axioms(g, "convex-geometry")
    checks.append(_check("G is a convex geometry", ax.ok, report=ax.to_json()))
    ax2 = cl.verify_axioms(g_prime, "convex-geometry")
    checks.append(_check("G' is a convex geometry", ax2.ok, report=ax2.to_json()))

    expected = {"x": "x", "y": "y", "S": ["a0", "a1", "a2"]}
    w = cl.carousel_check(g, cl.WEAK_2X3)
    got = w.counterexample or {}
    checks.append(_check("G fails weak-2x3 at (x, y, a0a1a2)", not w.holds and
                         {k: got.get(k) for k in expected} == expected, verdict=w.to_json()))
    c2 = cl.carousel_check(g, cl.N_CAROUSEL, n=2)
    checks.append(_check("G fails the 2-carousel rule", not c2.holds, verdict=c2.to_json()))
    # the pair (x, y) over a0a1a2 fails the 2-carousel rule too
    checks.append(_check("2-carousel fails on (x, y, a0a1a2)", _pair_fails(g, "x", "y", ("a0", "a1", "a2"))))
    wp = cl.carousel_check(g_prime, cl.WEAK_2X3)
    checks.append(_check("G' satisfies weak-2x3", wp.holds, verdict=wp.to_json()))
    cp = cl.carousel_check(g_prime, cl.N_CAROUSEL, n=2)
    checks.append(_check("G' satisfies the 2-carousel rule", cp.holds, verdict=cp.to_json()))

    cd = cl.convex_dimension(g, k_max, budget_seconds)
    certified = cd.k == 6 and cd.exhaustive_below and cd.complete
    checks.append(_check("cdim(G) = 6 with refutation of k <= 5", certified, result=cd.to_json()))
    return {"ok": all(c["ok"] for c in checks), "checks": checks}


def _pair_fails(g: cl.ClosedFamily, x: str, y: str, s: tuple[str, ...]) -> bool:
    return all(x not in g.closure_of([y, u, v]) for u, v in ((s[0], s[1]), (s[1], s[2]), (s[0], s[2])))


def small_geometry_sweep(n: int) -> dict:
    if not 1 <= n <= 4:
        raise cl.InputError("sweep supports 1 <= n <= 4")
    rows = []
    for k in range(1, n + 1):
        total = failures = 0
        first = None
        for geo in cl.enumerate_convex_geometries(k):
            total += 1
            v = cl.carousel_check(geo, cl.WEAK_2X3)
            if not v.holds:
                failures += 1
                first = first or {"sets": geo.named_sets(), "counterexample": v.counterexample}
        other = cl.count_convex_geometries_by_anti_exchange(k)
        rows.append({"n": k, "geometries": total, "anti_exchange_count": other,
                     "oracles_agree": other == total, "failures": failures, "first_failure": first})
    return {"ok": all(r["oracles_agree"] and r["failures"] == 0 for r in rows), "rows": rows}


def _s3_scene(seed: int, budget: int, tries: int) -> tuple[Scene, dict] | None:
    for attempt in range(tries):
        found = search_realization("S3", budget, seed + attempt)
        if found is None:
            continue
        tri, x, y = relabel(*found, "123")
        scene = Scene({"x": x, "y": y}, DEFAULT_TOLERANCE, tri).with_vertices()
        fam = scene_alignment(scene)
        weak = cl.carousel_check(fam, cl.WEAK_2X3)
        strong = cl.carousel_check(fam, cl.N_CAROUSEL, n=2)
        if weak.holds and not strong.holds and _pair_fails(fam, "x", "y", ("A", "B", "C")):
            return scene, {"attempt": attempt, "weak_2x3": weak.to_json(), "carousel_2": strong.to_json()}
    return None


def ab_xy_scene(seed: int, budget: int) -> tuple[Scene, dict] | None:
    """Random search for four circles a, b, x, y realizing the single implication ab -> xy."""
    ground = cl.GroundSet(("a", "b", "x", "y"))
    target = cl.closure_from_implications(ground, [cl.implication(ground, "ab", "xy")])
    for i in range(budget):
        rng = trial_rng(seed, i)
        a = Circle.at(*rng.uniform(0.0, 0.3, 2), float(rng.uniform(0.02, 0.15)))
        b = Circle.at(*rng.uniform(0.7, 1.0, 2), float(rng.uniform(0.02, 0.15)))
        circles = {"a": a, "b": b}
        for name in "xy":
            t = float(rng.uniform(0.2, 0.8))
            side = float(rng.uniform(-1, 1))
            base = Point(a.center.x + t * (b.center.x - a.center.x), a.center.y + t * (b.center.y - a.center.y))
            d = b.center - a.center
            n = Point(-d.y, d.x).scale(1 / math.hypot(*d))
            width = a.r + t * (b.r - a.r)
            circles[name] = Circle(base + n.scale(side * width), float(rng.uniform(0.0, 0.5)) * width)
        scene = Scene(circles, DEFAULT_TOLERANCE)
        fam = scene_alignment(scene)
        if fam.sets != target.sets:
            continue
        emb = cl.embedding_search(fam, target, mode="strong")
        if emb.status == cl.FOUND:
            return scene, {"trial": i, "ground_map": emb.ground_map, "closed_sets": len(fam.sets)}
    return None


def representation_checks(seed: int = 0, budget: int = 100_000, ab_budget: int = 20_000) -> dict:
    checks = []
    s3 = _s3_scene(seed, budget, tries=20)
    if s3 is None:
        checks.append(_check("S3 scene: weak-2x3 holds, 2-carousel fails with x", False, status=cl.BUDGET))
    else:
        scene, detail = s3
        checks.append(_check("S3 scene: weak-2x3 holds, 2-carousel fails with x", True,
                             scene=scene_json(dict(scene.circles), scene.triangle), **detail))
    ab = ab_xy_scene(seed, ab_budget)
    if ab is None:
        checks.append(_check("four circles strongly isomorphic to ab -> xy", False, status=cl.BUDGET))
    else:
        scene, detail = ab
        checks.append(_check("four circles strongly isomorphic to ab -> xy", True,
                             scene=scene_json(dict(scene.circles)), **detail))
    return {"ok": all(c["ok"] for c in checks), "checks": checks}


def realizability_sweep(budget: int = 100_000, seed: int = 0) -> dict:
    """Search every class; realizable ones must be found, dismissed ones never."""
    from .triangles import class_table

    rows = []
    for name, info in class_table().items():
        found = search_realization(name, budget, seed)
        row = {"class": name, "realizable": info.realizable, "found": found is not None}
        if found is not None:
            tri, x, y = found
            row["code"] = "".join(map(str, config_code(tri, x, y)))
            row["scene"] = scene_json({"x": x, "y": y}, tri)
        rows.append(row)
    ok = all(r["found"] == r["realizable"] for r in rows)
    return {"ok": ok, "rows": rows}
