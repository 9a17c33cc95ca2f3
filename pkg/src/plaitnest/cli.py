"""Command-line surface.

Subcommands: `threshold` prints the critical amplitude, `classify` runs
the requested classification methods on a sampled family, `stage` builds
a substitution stage and writes its report and figure, `verify` runs the
property suites, and `figure` regenerates the shipped figures.

All machine output is JSON on stdout (validating against the schemas
shipped with the package); progress notes go to stderr.  Exit codes:
0 success, 1 verification failure, 2 usage, 3 numeric or geometric
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .classifier import ArcFamily, enclosure_report, lift_report
from .errors import DegenerateAmplitude, PlaitnestError, UsageError
from .geometry.primitives import INTERSECT_TOL, Point2
from .render import FIGURES, render_svg, stage_scene
from .sinefamily import (DEFAULT_WINDOW, SineFamilyParams, classify_analytic,
                         family_arcs, plaiting_threshold)
from .substitution import DEFAULT_MAX_STAGE, SubstitutionSystem, builtin_system
from .verification import DEFAULT_SEED, run_suite

_JSON_KW = {"indent": 1, "sort_keys": False}


def _write(out_dir: Path, name: str, data) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    if isinstance(data, bytes):
        path.write_bytes(data)
    else:
        path.write_text(data, encoding="utf-8")
    print(f"wrote {path}", file=sys.stderr)
    return path


def cmd_threshold(args) -> int:
    if args.n < 2:
        raise UsageError(f"threshold needs --n >= 2, got {args.n}")
    value = plaiting_threshold(args.n)
    branch = "even" if args.n % 2 == 0 else "odd"
    if args.json_out:
        print(json.dumps({"n": args.n, "threshold": value, "branch": branch},
                         **_JSON_KW))
    else:
        print(f"{value:.9f}")
        formula = ("pi/2" if branch == "even"
                   else "pi/(2*sin(pi*(N-1)/(2*N)))")
        print(f"branch: {branch} ({formula})")
    return 0


def cmd_classify(args) -> int:
    if args.a == 0.0:
        raise DegenerateAmplitude("amplitude a = 0 collapses every arc onto "
                                  "the unit circle; nothing to classify")
    window = tuple(args.window) if args.window else DEFAULT_WINDOW
    params = SineFamilyParams(args.n, args.a, window)
    doc = {"n": args.n, "a": args.a,
           "window": [params.window[0], params.window[1]],
           "method": args.method, "tol": args.tol}
    results = {}
    if args.method in ("analytic", "all"):
        results["analytic"] = classify_analytic(params).value
    if args.method in ("lift", "enclosure", "all"):
        arcs, groups, parities = family_arcs(params)
        fam = ArcFamily(arcs, Point2(0.0, 0.0),
                        groups=groups, parities=parities)
        if args.method in ("lift", "all"):
            rep = lift_report(fam, args.tol)
            results["lift"] = rep.verdict.value
            doc["lift"] = rep.to_json()
        if args.method in ("enclosure", "all"):
            rep = enclosure_report(fam, args.tol)
            results["enclosure"] = rep.verdict.value
            doc["enclosure"] = rep.to_json()
    doc["results"] = results
    if args.method == "all":
        doc["agreement"] = len(set(results.values())) == 1
    text = json.dumps(doc, **_JSON_KW)
    print(text)
    if args.out is not None:
        _write(args.out, "classify.json", text + "\n")
    return 0


def _region_doc(quads) -> dict:
    boxes = []
    for q in quads:
        boxes.append([float(q[:, 0].min()), float(q[:, 1].min()),
                      float(q[:, 0].max()), float(q[:, 1].max())])
    return {"count": len(boxes), "boxes": boxes}


def cmd_stage(args) -> int:
    if args.builtin is not None:
        sys_ = builtin_system(args.builtin, max_stage=args.max_stage,
                              tol=args.tol)
    else:
        sys_ = SubstitutionSystem.load(args.system, max_stage=args.max_stage,
                                       tol=args.tol)
    n = args.n
    sc = sys_.stage(n)
    recs = sys_.stage_intersections(n)
    witnesses = {str(d): [bool(v) for v in sys_.nesting_witnesses(n, d)]
                 for d in range(min(n, 2) + 1)}
    doc = {
        "variant": sys_.variant,
        "n": n,
        "vertex_count": int(sc.curve.vertices.shape[0]),
        "crossings": {
            "count": len(recs),
            "base_positions": [float(r.t_first) for r in recs],
        },
        "dirty_regions": _region_doc(sc.dirty_regions),
        "changed_regions": _region_doc(sc.changed_regions),
        "witnesses": witnesses,
    }
    if n >= 6:
        doc["self_similarity_period"] = sys_.self_similarity_period(n)
    text = json.dumps(doc, **_JSON_KW)
    print(text)
    base = f"stage-{sys_.variant}-{n}"
    if args.emit in ("json", "both"):
        _write(args.out, base + ".json", text + "\n")
    if args.emit in ("svg", "both"):
        _write(args.out, base + ".svg", render_svg(stage_scene(sys_, n)))
    return 0


def cmd_verify(args) -> int:
    reports = run_suite(args.suite, seed=args.seed)
    for rep in reports:
        for res in rep.results:
            status = "pass" if res.passed else "FAIL"
            print(f"[{rep.suite}] {res.name}: {status} ({res.seconds:.3f}s)",
                  file=sys.stderr)
            if not res.passed:
                print(f"  {res.detail}", file=sys.stderr)
                if res.counterexample is not None:
                    print(f"  counterexample: "
                          f"{json.dumps(res.counterexample)}", file=sys.stderr)
    doc = {"seed": args.seed,
           "passed": all(rep.passed for rep in reports),
           "suites": [rep.to_json() for rep in reports]}
    text = json.dumps(doc, **_JSON_KW)
    print(text)
    if args.out is not None:
        _write(args.out, "verify.json", text + "\n")
    return 0 if doc["passed"] else 1


def cmd_figure(args) -> int:
    names = list(FIGURES) if args.name == "all" else [args.name]
    for name in names:
        _write(args.out, name + ".svg", render_svg(FIGURES[name]()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plaitnest",
        description="Sine arc families, plaited/nested classification, "
                    "and substitution stage curves.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    t = sub.add_parser("threshold",
                       help="critical amplitude a*(N) for N arcs")
    t.add_argument("--n", type=int, required=True, metavar="N",
                   help="number of arcs (N >= 2)")
    t.add_argument("--json", action="store_true", dest="json_out",
                   help="emit JSON instead of text")
    t.set_defaults(func=cmd_threshold)

    c = sub.add_parser("classify",
                       help="classify the N-arc family at amplitude a")
    c.add_argument("--n", type=int, required=True, metavar="N")
    c.add_argument("--a", type=float, required=True, metavar="A")
    c.add_argument("--window", type=float, nargs=2, metavar=("MIN", "MAX"),
                   help="lift-coordinate sampling window")
    c.add_argument("--method", default="all",
                   choices=("analytic", "lift", "enclosure", "all"))
    c.add_argument("--tol", type=float, default=INTERSECT_TOL)
    c.add_argument("--out", type=Path, metavar="DIR",
                   help="also write classify.json here")
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("stage", help="build one substitution stage")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", choices=("nesting", "plaiting"))
    src.add_argument("--system", type=Path, metavar="FILE",
                     help="substitution system JSON file")
    s.add_argument("--n", "--stage", dest="n", type=int, required=True,
                   metavar="N", help="stage number")
    s.add_argument("--emit", default="json", choices=("json", "svg", "both"))
    s.add_argument("--out", type=Path, default=Path("."), metavar="DIR")
    s.add_argument("--max-stage", type=int, default=DEFAULT_MAX_STAGE)
    s.add_argument("--tol", type=float, default=INTERSECT_TOL)
    s.set_defaults(func=cmd_stage)

    v = sub.add_parser("verify", help="run the property suites")
    v.add_argument("--suite", default="all",
                   choices=("sine", "classifier", "ifs", "all"))
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--out", type=Path, metavar="DIR",
                   help="also write verify.json here")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("figure", help="regenerate the shipped SVG figures")
    f.add_argument("--name", default="all",
                   choices=tuple(FIGURES) + ("all",))
    f.add_argument("--out", type=Path, default=Path("."), metavar="DIR")
    f.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except PlaitnestError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
