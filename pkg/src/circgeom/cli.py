"""Command-line front end.

Every verb prints one JSON document on stdout.  Exit status is 0 when all
checks pass, 1 when a violation or counterexample was found and 2 for bad
input or usage.
"""

from __future__ import annotations

import argparse
import secrets
import sys
from pathlib import Path

from . import closure as cl
from . import harness
from .discs import Scene
from .fileio import dump, geometry_to_json, load_geometry, load_scene, scene_to_json
from .plotting import render_histogram, render_scene
from .planar import GeometryError
from .triangles import (
    DegenerateConfiguration,
    canonical_member,
    class_of,
    class_table,
    class_table_json,
    config_code,
    format_class,
    format_code,
    parse_code,
    relabel,
    search_realization,
)

OK, VIOLATION, USAGE = 0, 1, 2
RANDOMIZED = {"realize", "fuzz-thm1", "fuzz-thm2", "lemmas", "represent"}


def _emit(data) -> None:
    sys.stdout.write(dump(data) + "\n")


def _alignment(path: str) -> cl.ClosedFamily:
    g = load_geometry(path)
    rep = cl.verify_axioms(g, cl.ALIGNMENT)
    if not rep.ok:
        raise cl.InputError(f"{path}: closed sets do not form an alignment ({rep.violation})")
    return g


def cmd_verify(args) -> int:
    g = load_geometry(args.geometry)
    modes = cl.AXIOM_MODES if args.mode == "all" else (args.mode,)
    reports = {m: cl.verify_axioms(g, m).to_json() for m in modes}
    ok = all(r["ok"] for r in reports.values())
    _emit({"elements": list(g.ground.elements), "closed_sets": len(g.sets), "ok": ok, "axioms": reports})
    return OK if ok else VIOLATION


def cmd_cdim(args) -> int:
    g = _alignment(args.geometry)
    res = cl.convex_dimension(g, args.max_k, args.budget)
    _emit(res.to_json())
    # a partial certificate is reported, never passed off as a result
    return OK if res.complete and res.k is not None else VIOLATION


def cmd_carousel(args) -> int:
    g = _alignment(args.geometry)
    v = cl.carousel_check(g, args.rule, args.n)
    _emit(v.to_json())
    return OK if v.holds else VIOLATION


def _scene_pair(scene: Scene, args):
    if scene.triangle is None:
        raise cl.InputError(f"{args.scene}: classify needs a triangle")
    try:
        return scene.circles[args.x], scene.circles[args.y]
    except KeyError as exc:
        raise cl.InputError(f"{args.scene}: no circle named {exc.args[0]!r}") from None


def cmd_classify(args) -> int:
    scene = load_scene(args.scene)
    x, y = _scene_pair(scene, args)
    try:
        code = config_code(scene.triangle, x, y, scene.tolerance)
    except DegenerateConfiguration as exc:
        _emit({"code": None, "class": None, "degenerate": True, "reason": str(exc)})
        return OK
    except GeometryError as exc:
        raise cl.InputError(f"{args.scene}: {exc}") from None
    name = class_of(code)
    realizable = class_table()[name].realizable
    _emit({"code": format_code(code), "class": format_class(name), "realizable": realizable, "degenerate": False})
    return OK if realizable else VIOLATION


def _class_name(text: str) -> str:
    name = "S" + text.upper().lstrip("S").lstrip("_").strip("{}")
    if name not in class_table():
        raise cl.InputError(f"unknown class {text!r}; expected S1..S38")
    return name


def cmd_realize(args) -> int:
    name = _class_name(args.class_name)
    realizable = class_table()[name].realizable
    found = search_realization(name, args.budget, args.seed, args.margin)
    if found is not None:
        target = args.code or canonical_member(name)
        try:
            found = relabel(*found, parse_code(target))
        except ValueError as exc:
            raise cl.InputError(f"--code {target}: {exc}") from None
    out = {"class": format_class(name), "realizable": realizable, "found": found is not None,
           "budget": args.budget, "seed": args.seed}
    if found is not None:
        tri, x, y = found
        scene = Scene({"x": x, "y": y}, triangle=tri)
        out["code"] = format_code(config_code(tri, x, y))
        out["scene"] = scene_to_json(scene)
        if args.out:
            Path(args.out).write_text(dump(out["scene"]) + "\n")
        if args.figure:
            render_scene(scene, args.figure, regions=True)
    _emit(out)
    return OK if (found is not None) == realizable else VIOLATION


def cmd_class_table(args) -> int:
    data = class_table_json()
    if args.out:
        Path(args.out).write_text(dump(data) + "\n")
    _emit(data)
    return OK


def _params(args) -> harness.FuzzParams:
    return harness.FuzzParams(args.trials, args.seed, args.margin, args.tolerance)


def _write_violations(report: harness.FuzzReport, directory: str | None) -> None:
    if not directory or not report.violations:
        return
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for v in report.violations:
        (d / f"violation-{v['trial']}.json").write_text(dump(v) + "\n")


def cmd_fuzz_thm1(args) -> int:
    report = harness.fuzz_theorem1(_params(args))
    if args.figure:
        render_histogram(report.histogram, args.figure, "observed configuration classes")
    _write_violations(report, args.violations_dir)
    _emit(report.to_json())
    return OK if report.ok else VIOLATION


def cmd_fuzz_thm2(args) -> int:
    report = harness.fuzz_theorem2(_params(args), args.accepted)
    _write_violations(report, args.violations_dir)
    _emit(report.to_json())
    return OK if report.ok else VIOLATION


def cmd_lemmas(args) -> int:
    res = harness.lemma_suite(args.instances, args.seed, args.margin)
    _emit({"seed": args.seed, "instances": args.instances, "lemmas": res})
    return OK if all(r["ok"] for r in res.values()) else VIOLATION


def cmd_counterexample(args) -> int:
    res = harness.counterexample_suite(budget_seconds=args.budget)
    g_prime, g = cl.counterexample_geometries()
    res["G"] = geometry_to_json(g)
    res["G_prime"] = geometry_to_json(g_prime)
    _emit(res)
    return OK if res["ok"] else VIOLATION


def cmd_sweep(args) -> int:
    res = harness.small_geometry_sweep(args.n)
    _emit(res)
    return OK if res["ok"] else VIOLATION


def cmd_represent(args) -> int:
    res = harness.representation_checks(args.seed, args.budget)
    _emit(res)
    return OK if res["ok"] else VIOLATION


def cmd_render(args) -> int:
    scene = load_scene(args.scene)
    render_scene(scene, args.out, regions=args.regions)
    _emit({"out": str(args.out), "circles": list(scene.names), "regions": args.regions})
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="circgeom", description="Convex geometries of circles: checks and campaigns.")
    p.add_argument("--ci", action="store_true", help="require --seed on randomized verbs")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("verify", help="check closure-system axioms of a geometry file")
    s.add_argument("geometry")
    s.add_argument("--mode", default="all", choices=("all", *cl.AXIOM_MODES))
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("cdim", help="convex dimension by exact chain-cover search")
    s.add_argument("geometry")
    s.add_argument("--max-k", type=int, default=8)
    s.add_argument("--budget", type=float, default=1800.0, help="seconds")
    s.set_defaults(func=cmd_cdim)

    s = sub.add_parser("carousel", help="test a carousel rule")
    s.add_argument("geometry")
    s.add_argument("--rule", required=True, choices=("n", "weak-n", "weak-2x3"))
    s.add_argument("--n", type=int, default=2)
    s.set_defaults(func=cmd_carousel)

    s = sub.add_parser("classify", help="configuration code and class of two circles in a triangle")
    s.add_argument("scene")
    s.add_argument("--x", default="x")
    s.add_argument("--y", default="y")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("realize", help="search for a scene in a configuration class")
    s.add_argument("--class", dest="class_name", required=True)
    s.add_argument("--budget", type=int, default=100_000)
    s.add_argument("--seed", type=int)
    s.add_argument("--margin", type=float, default=1e-3)
    s.add_argument("--code", help="relabel the witness to this member of the class (default: first listed)")
    s.add_argument("--out", help="write the found scene here")
    s.add_argument("--figure", help="render the found scene as SVG")
    s.set_defaults(func=cmd_realize)

    s = sub.add_parser("class-table", help="the 38 configuration classes")
    s.add_argument("--out")
    s.set_defaults(func=cmd_class_table)

    for verb, func, trials in (("fuzz-thm1", cmd_fuzz_thm1, 10_000), ("fuzz-thm2", cmd_fuzz_thm2, 2_000)):
        s = sub.add_parser(verb, help="seeded fuzz campaign")
        s.add_argument("--trials", type=int, default=trials)
        s.add_argument("--seed", type=int)
        s.add_argument("--margin", type=float, default=1e-3)
        s.add_argument("--tolerance", type=float, default=1e-9)
        s.add_argument("--violations-dir", help="write each violating scene as a scene file")
        if verb == "fuzz-thm1":
            s.add_argument("--figure", help="class histogram as SVG")
        else:
            s.add_argument("--accepted", type=int, help="run until this many scenes are accepted")
        s.set_defaults(func=func)

    s = sub.add_parser("lemmas", help="seeded lemma suite")
    s.add_argument("--instances", type=int, default=10_000)
    s.add_argument("--seed", type=int)
    s.add_argument("--margin", type=float, default=1e-3)
    s.set_defaults(func=cmd_lemmas)

    s = sub.add_parser("counterexample", help="checks on the five-element geometry G and G'")
    s.add_argument("--budget", type=float, default=1800.0, help="seconds for the cdim search")
    s.set_defaults(func=cmd_counterexample)

    s = sub.add_parser("sweep", help="weak 2x3 rule on every convex geometry with n <= 4 elements")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("represent", help="circle scenes realizing S3 and the ab -> xy geometry")
    s.add_argument("--seed", type=int)
    s.add_argument("--budget", type=int, default=100_000)
    s.set_defaults(func=cmd_represent)

    s = sub.add_parser("render", help="draw a scene as SVG")
    s.add_argument("scene")
    s.add_argument("--out", required=True)
    s.add_argument("--regions", action="store_true")
    s.set_defaults(func=cmd_render)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verb in RANDOMIZED and getattr(args, "seed", None) is None:
        if args.ci:
            parser.error(f"{args.verb} needs --seed in --ci mode")
        args.seed = secrets.randbits(32)
        print(f"seed: {args.seed}", file=sys.stderr)
    try:
        return args.func(args)
    except cl.InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
