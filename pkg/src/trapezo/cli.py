"""Command-line front end.

Exit codes: 0 interior/success, 1 usage or input error, 2 boundary,
3 exterior.  Angles are in radians unless ``--deg`` is given.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

from . import geometry, gluing, region
from .errors import HoledInput, InvalidStart, NotRealizable, TrapezoError
from .region import AngleQuad, CosQuad, Kind, ShapeParams

EXIT_OK, EXIT_USAGE, EXIT_BOUNDARY, EXIT_EXTERIOR = 0, 1, 2, 3
EXIT_OF_KIND = {Kind.INTERIOR: EXIT_OK, Kind.BOUNDARY: EXIT_BOUNDARY, Kind.EXTERIOR: EXIT_EXTERIOR}


class UsageError(Exception):
    pass


def default_tol() -> float:
    raw = os.environ.get("TRAPEZO_TOL")
    if raw is None:
        return region.DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"TRAPEZO_TOL={raw!r} is not a number")
    if not tol > 0:
        raise UsageError("TRAPEZO_TOL must be positive")
    return tol


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"{text} is not positive")
    return v


def _fix(text: str) -> tuple[int, float]:
    try:
        i, v = text.split("=", 1)
        return int(i), float(v)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected i=value, got {text!r}")


def _add_point(p: argparse.ArgumentParser, required: bool = True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--angles", nargs=4, type=float, metavar="A", help="dihedral angles alpha_1..4")
    g.add_argument("--cos", nargs=4, type=float, metavar="C", help="cosines c_1..4")
    g.add_argument("--params", nargs=5, type=float, metavar="X", help="shape q1 q2 q3 q4 t")
    p.add_argument("--deg", action="store_true", help="angles are in degrees")


def _add_output(p: argparse.ArgumentParser, formats: tuple[str, ...]):
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--out", type=Path, help="write here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trapezo",
        description="Realizability and construction of hyperbolic trapezohedra.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="locate a point relative to the realizable region")
    _add_point(p)
    p.add_argument("--band", type=_positive, default=region.DEFAULT_BAND)
    p.add_argument("--tol", type=_positive)
    _add_output(p, ("json",))

    p = sub.add_parser("solve", help="shape parameters (q, t) for given angles")
    _add_point(p)
    p.add_argument("--tol", type=_positive)
    _add_output(p, ("json",))

    p = sub.add_parser("geom", help="vertex, face and edge data; optional SVG projection")
    _add_point(p)
    p.add_argument("--tol", type=_positive)
    p.add_argument("--holed", action="store_true", help="allow holes for non-realizable shapes")
    _add_output(p, ("json", "svg"))

    p = sub.add_parser("trace", help="first exit from the region along a straight angle path")
    _add_point(p)
    p.add_argument("--start", nargs=4, type=float, metavar="A",
                   help="start angles (default: all equal to max(end) + 0.01)")
    p.add_argument("--band", type=_positive, default=region.DEFAULT_BAND)
    p.add_argument("--bisect-tol", type=_positive, default=1e-9)
    p.add_argument("--tol", type=_positive)
    _add_output(p, ("json",))

    p = sub.add_parser("sample", help="classify a 2-D slice of cosine space")
    p.add_argument("--fix", type=_fix, action="append", required=True, metavar="I=V",
                   help="fixed cosine coordinate; give exactly two")
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--band", type=_positive, default=region.DEFAULT_BAND)
    _add_output(p, ("csv", "svg"))

    p = sub.add_parser("glue", help="glue four copies and check the cone angle sums")
    _add_point(p)
    p.add_argument("--tol", type=_positive)
    _add_output(p, ("json",))
    return parser


# --------------------------------------------------------------------------


def _point(args) -> tuple[CosQuad, ShapeParams | None]:
    """Cosines from whichever input mode was used, plus the shape when given."""
    if args.params is not None:
        shape = ShapeParams(tuple(args.params[:4]), args.params[4])
        return region.angles_of_shape(shape), shape
    if args.angles is not None:
        a = AngleQuad.from_degrees(args.angles) if args.deg else AngleQuad(tuple(args.angles))
        return region.cos_quad(a), None
    return CosQuad(tuple(args.cos)), None


def _shape(args, c: CosQuad, given: ShapeParams | None) -> ShapeParams:
    if given is not None:
        return given
    return region.solve_shape(c, args.tol or default_tol())


def _angles(c: CosQuad) -> AngleQuad:
    return AngleQuad(tuple(math.acos(x) for x in c))


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        out.write_text(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def cmd_classify(args) -> int:
    c, _ = _point(args)
    cl = region.classify(c, args.band)
    _emit(_dump({
        "kind": cl.kind.value,
        "edges": sorted(cl.edges),
        "phi": list(cl.phi),
        "c": list(c.c),
    }), args.out)
    return EXIT_OF_KIND[cl.kind]


def cmd_solve(args) -> int:
    c, given = _point(args)
    shape = _shape(args, c, given)
    _emit(_dump({
        "q": list(shape.q),
        "t": shape.t,
        "residual": region.shape_residual(shape),
        "c": list(c.c),
        "realizable_edges": list(region.realizable_edges(shape)),
    }), args.out)
    return EXIT_OK


def cmd_geom(args) -> int:
    from .plotting import plot_projection

    c, given = _point(args)
    shape = _shape(args, c, given)
    try:
        trap = geometry.build_holed(shape) if args.holed else geometry.build(shape)
    except NotRealizable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OF_KIND[region.classify(c).kind] or EXIT_EXTERIOR
    if args.format == "svg":
        if args.out is None:
            buf = io.StringIO()
            plot_projection(trap, buf, fmt="svg")
            _emit(buf.getvalue(), None)
        else:
            plot_projection(trap, args.out)
        return EXIT_OK
    doc = trap.to_dict()
    doc["q"] = list(shape.q)
    doc["holed_edges"] = sorted(trap.holed_edges)
    _emit(_dump(doc), args.out)
    if args.out is not None:
        plot_projection(trap, args.out.with_suffix(".svg"))
    return EXIT_OK


def cmd_trace(args) -> int:
    c, _ = _point(args)
    end = _angles(c)
    if args.start is not None:
        start = AngleQuad.from_degrees(args.start) if args.deg else AngleQuad(tuple(args.start))
    else:
        top = max(end.alpha) + 0.01
        if top >= math.pi:
            top = 0.5 * (max(end.alpha) + math.pi)
        start = AngleQuad((top,) * 4)
    try:
        hit = region.trace_path(start, end, args.bisect_tol, args.band)
    except InvalidStart as exc:
        raise UsageError(str(exc))
    doc = {"start": list(start.alpha), "end": list(end.alpha)}
    if hit is None:
        doc["crossing"] = None
    else:
        doc["crossing"] = {
            "s_star": hit.s_star,
            "kind": hit.kind.value,
            "edges": sorted(hit.edges),
            "post_state": sorted(hit.post_state),
            "alpha": list(hit.alpha.alpha),
        }
    _emit(_dump(doc), args.out)
    return EXIT_OK


def slice_rows(free, xs, ys, states):
    kinds = region.kinds_of_states(states)
    names = {0: "interior", 1: "boundary", 2: "exterior"}
    for ix, x in enumerate(xs):
        for iy, y in enumerate(ys):
            k = int(kinds[ix, iy])
            edges = [i + 1 for i in range(4) if k and states[ix, iy, i] == k]
            yield x, y, names[k], ";".join(map(str, edges))


def cmd_sample(args) -> int:
    from .plotting import plot_slice

    fixed = dict(args.fix)
    if len(args.fix) != 2 or len(fixed) != 2:
        raise UsageError("sample needs exactly two distinct --fix i=v")
    try:
        free, xs, ys, states = region.slice_grid(fixed, args.grid, args.band)
    except ValueError as exc:
        raise UsageError(str(exc))
    kinds = region.kinds_of_states(states)
    if args.format == "svg":
        if args.out is None:
            buf = io.StringIO()
            plot_slice(free, xs, ys, kinds, buf, fmt="svg")
            _emit(buf.getvalue(), None)
        else:
            plot_slice(free, xs, ys, kinds, args.out)
        return EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["c1", "c2", "kind", "edges"])
    for x, y, kind, edges in slice_rows(free, xs, ys, states):
        w.writerow([repr(float(x)), repr(float(y)), kind, edges])
    _emit(buf.getvalue(), args.out)
    if args.out is not None:
        plot_slice(free, xs, ys, kinds, args.out.with_suffix(".svg"))
    return EXIT_OK


def cmd_glue(args) -> int:
    c, given = _point(args)
    shape = _shape(args, c, given)
    trap = geometry.build_holed(shape)
    try:
        gc = gluing.build_complex(trap)
    except HoledInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OF_KIND[region.classify(c).kind] or EXIT_EXTERIOR
    report = gluing.verify_cone_structure(gc, _angles(c))
    doc = report.to_dict()
    doc["complex"] = gc.to_dict()
    doc["cusps"] = [sorted(x) for x in gc.cusps()]
    _emit(_dump(doc), args.out)
    return EXIT_OK if report.ok else EXIT_USAGE


COMMANDS = {
    "classify": cmd_classify,
    "solve": cmd_solve,
    "geom": cmd_geom,
    "trace": cmd_trace,
    "sample": cmd_sample,
    "glue": cmd_glue,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ValueError, TrapezoError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
