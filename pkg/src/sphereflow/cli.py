"""Command-line front end.

Subcommands: check, classify, singularities, nocycles, hopf, conjecture,
integrate.  Reports are JSON on stdout (sorted keys, so identical inputs
produce byte-identical output); portraits and bifurcation diagrams are
written as SVG files.  Exit codes: 0 success, 1 parse/IO error,
2 precondition violation, 3 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import families
from .numerics import PreconditionViolated, hopf_scan, integrate_sphere
from .qualitative import (BranchCoordinateZero, NotInScope, case_reduce,
                          nocycles_central, nocycles_stereo,
                          portrait_classify, rotated_family_check)
from .singular import enumerate_singularities
from .spherefield import (FieldError, HomVectorField, NotTangent, QuadCoeffs,
                          is_tangent, quad_field, to_quad_normal_form)

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_PRECONDITION = 2
EXIT_INCONSISTENT = 3


class ParseError(ValueError):
    pass


def _coerce_scalar(v):
    if isinstance(v, bool):
        raise ParseError(f"not a coefficient: {v!r}")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v).limit_denominator(10 ** 12)
    if isinstance(v, list) and len(v) == 2:
        return Fraction(int(v[0]), int(v[1]))
    raise ParseError(f"not a coefficient: {v!r}")


def load_coeffs(obj: dict) -> QuadCoeffs:
    d = obj.get("coeffs") or obj.get("quad")
    if not isinstance(d, dict):
        raise ParseError('expected a "coeffs" object with keys a1..a8')
    unknown = set(d) - {f"a{i}" for i in range(1, 9)}
    if unknown:
        raise ParseError(f"unknown coefficient keys: {sorted(unknown)}")
    return QuadCoeffs(*(_coerce_scalar(d.get(f"a{i}", 0))
                        for i in range(1, 9)))


def load_field(path: str) -> HomVectorField:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(obj, dict):
        raise ParseError("top-level JSON value must be an object")
    if "coeffs" in obj or "quad" in obj:
        return quad_field(load_coeffs(obj))
    if all(k in obj for k in ("P", "Q", "R")):
        try:
            return HomVectorField.from_json_obj(obj)
        except (ValueError, KeyError, TypeError, IndexError) as exc:
            raise ParseError(f"bad component records: {exc}") from exc
    raise ParseError('field JSON needs either "coeffs" or "P"/"Q"/"R"')


def emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_check(args) -> int:
    X = load_field(args.file)
    tangent = is_tangent(X)
    report = {"tangent": tangent, "degree": X.degree, "normal_form": None}
    if tangent and X.degree == 2:
        try:
            report["normal_form"] = to_quad_normal_form(X).to_dict()
        except FieldError:
            pass
    emit(report)
    return EXIT_OK if tangent else EXIT_PRECONDITION


def cmd_singularities(args) -> int:
    X = load_field(args.file)
    if not is_tangent(X):
        raise NotTangent("field is not tangent to the sphere")
    emit(enumerate_singularities(X).to_json_obj())
    return EXIT_OK


def cmd_classify(args) -> int:
    X = load_field(args.file)
    if not is_tangent(X):
        raise NotTangent("field is not tangent to the sphere")
    if X.degree != 2 and not X.is_zero():
        raise PreconditionViolated("classification requires degree 2")
    sing = enumerate_singularities(X)
    portrait = portrait_classify(X)
    report = {
        "singularities": sing.to_json_obj(),
        "portrait": portrait.to_json_obj(),
        "nocycles": nocycles_stereo(X).to_json_obj(),
        "reduction": None,
    }
    try:
        red = case_reduce(to_quad_normal_form(X))
        report["reduction"] = red.to_json_obj()
    except (NotInScope, FieldError):
        pass
    if args.svg:
        svg = render_portrait(X, title=portrait.full_label)
        with open(args.svg, "w") as fh:
            fh.write(svg)
        report["svg"] = args.svg
    emit(report)
    return EXIT_OK


def cmd_nocycles(args) -> int:
    X = load_field(args.file)
    if args.plane is None:
        verdict = nocycles_stereo(X)
    else:
        parts = args.plane.split(",")
        if len(parts) != 3:
            raise ParseError("--plane expects three comma-separated numbers")
        plane = tuple(_coerce_scalar(p.strip()) for p in parts)
        if all(v == 0 for v in plane):
            raise PreconditionViolated("plane normal must be nonzero")
        verdict = nocycles_central(X, plane)
    emit(verdict.to_json_obj())
    return EXIT_OK


def _parse_range(spec: str):
    parts = spec.split(":")
    if len(parts) != 3:
        raise ParseError("--range expects lo:hi:n")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ParseError(f"bad --range {spec!r}: {exc}") from exc
    if n < 1:
        raise ParseError("--range needs at least one sample")
    return lo, hi, n


def cmd_hopf(args) -> int:
    with open(args.file) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON in {args.file}: {exc}") from exc
    base = load_coeffs(obj)
    if args.param not in {f"a{i}" for i in range(1, 9)}:
        raise ParseError("--param must be one of a1..a8")
    lo, hi, n = _parse_range(args.range)
    idx = int(args.param[1]) - 1

    def builder(p: float) -> QuadCoeffs:
        vals = list(base)
        vals[idx] = Fraction(p).limit_denominator(10 ** 12)
        return QuadCoeffs(*vals)

    reports = hopf_scan(builder, lo, hi, n, tol=args.tol)
    cycles = [r.param for r in reports if r.cycle is not None]
    crossing = any(r1.re_lambda * r2.re_lambda < 0
                   for r1, r2 in zip(reports, reports[1:]))

    def _rotated_member(p: float) -> bool:
        q = builder(p)
        return q.a2 * (q.a5 + q.a7) - q.a1 * q.a8 == 0

    from .numerics import scan_parameters
    rotated = [_rotated_member(p) for p in scan_parameters(lo, hi, n)]
    summary = {
        "param": args.param,
        "samples": len(reports),
        "eigenvalue_crossing": crossing,
        "cycle_params": cycles,
        "rotated_members": sum(rotated),
        "no_hopf_bifurcation": not crossing and not cycles,
    }
    if all(rotated):
        summary["note"] = ("every sample lies in the rotated family "
                           "(a2*(a5+a7) = a1*a8): centers instead of weak "
                           "foci, no Hopf bifurcation")
    report = {"summary": summary,
              "reports": [r.to_json_obj() for r in reports]}
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(_bifurcation_svg(args.param, reports))
        report["svg"] = args.svg
    emit(report)
    return EXIT_OK


def _bifurcation_svg(name: str, reports) -> str:
    w, h, m = 480.0, 320.0, 40.0
    ps = [r.param for r in reports]
    ys = [r.re_lambda for r in reports]
    amp = [0.0 if r.cycle is None else r.cycle.offset for r in reports]
    lo, hi = min(ps), max(ps)
    span = (hi - lo) or 1.0
    ymax = max(max(abs(y) for y in ys), max(amp), 1e-12)

    def px(p):
        return m + (p - lo) / span * (w - 2 * m)

    def py(y):
        return h / 2 - y / ymax * (h / 2 - m)

    parts = ['<?xml version="1.0" encoding="UTF-8"?>',
             f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" '
             f'height="{h:.0f}" viewBox="0 0 {w:.0f} {h:.0f}">',
             f'<rect width="{w:.0f}" height="{h:.0f}" fill="white"/>',
             f'<line x1="{m}" y1="{h/2}" x2="{w-m}" y2="{h/2}" '
             'stroke="#999"/>',
             f'<text x="{w/2:.0f}" y="{h-8:.0f}" text-anchor="middle" '
             f'font-family="monospace" font-size="11">{name}</text>']
    line = " L ".join(f"{px(p):.2f} {py(y):.2f}" for p, y in zip(ps, ys))
    parts.append(f'<path d="M {line}" fill="none" stroke="#2c3e50" '
                 'stroke-width="1.5"/>')
    for r in reports:
        if r.cycle is not None:
            parts.append(f'<circle cx="{px(r.param):.2f}" '
                         f'cy="{py(r.cycle.offset):.2f}" r="3" '
                         'fill="#c0392b"/>')
    parts.append("</svg>")
    return "\n".join(parts)


def _random_fraction(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 9))


def _sample_saddle_family(rng: random.Random) -> QuadCoeffs:
    """Random member of the weak-focus family: a3 = a4 = a6 = 0, a1 != 0,
    a5*a7 > 0, a2*(a5+a7) - a1*a8 != 0."""
    while True:
        a1, a2, a5, a7, a8 = (_random_fraction(rng) for _ in range(5))
        if a1 == 0 or a5 * a7 <= 0 or a2 * (a5 + a7) - a1 * a8 == 0:
            continue
        return QuadCoeffs(a1, a2, 0, 0, a5, 0, a7, a8)


def cmd_conjecture(args) -> int:
    rng = random.Random(args.seed)
    detections = []
    rotated_ok = 0
    samples = []
    for k in range(args.samples):
        qc = _sample_saddle_family(rng)
        # companion family with the last coefficient locked so the induced
        # chart family is a rotated family; its property is re-verified
        # symbolically before the cycle sweep
        check = rotated_family_check(
            lambda c2: families.family144_chart(qc.a1, c2, qc.a5, qc.a7))
        if check.rotated:
            rotated_ok += 1
        report = hopf_scan(lambda _p, q=qc: q, 0.0, 0.0, 1,
                           tol=args.tol)[0]
        entry = {"index": k,
                 "coeffs": {f"a{i}": str(v)
                            for i, v in enumerate(qc, start=1)},
                 "rotated_companion": check.rotated,
                 "cycle": None if report.cycle is None
                 else report.cycle.to_json_obj(),
                 "no_return": report.no_return}
        samples.append(entry)
        if report.cycle is not None:
            detections.append(entry)
    emit({"samples": args.samples,
          "seed": args.seed,
          "rotated_companion_verified": rotated_ok,
          "detections": detections,
          "detection_count": len(detections),
          "results": samples})
    return EXIT_OK


def cmd_integrate(args) -> int:
    X = load_field(args.file)
    parts = args.start.split(",")
    if len(parts) != 3:
        raise ParseError("--from expects x,y,z")
    try:
        x0 = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ParseError(f"bad --from: {exc}") from exc
    norm2 = sum(v * v for v in x0)
    if abs(norm2 - 1.0) > 1e-6:
        raise PreconditionViolated("--from must lie on the unit sphere")
    x0 = tuple(v / norm2 ** 0.5 for v in x0)
    traj = integrate_sphere(X, x0, (0.0, args.t), tol=args.tol)
    csv = traj.to_csv_str()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv)
    else:
        sys.stdout.write(csv)
    return EXIT_OK


def render_portrait(X: HomVectorField, title: str = "") -> str:
    from .render import render_svg
    return render_svg(X, title=title)


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sphereflow",
        description="Analysis of homogeneous polynomial vector fields "
                    "tangent to the unit sphere.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="tangency and normal-form report")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classify", help="phase-portrait classification")
    p.add_argument("file")
    p.add_argument("--svg", help="write a Poincaré-disc portrait")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("singularities", help="enumerate singular points")
    p.add_argument("file")
    p.set_defaults(func=cmd_singularities)

    p = sub.add_parser("nocycles",
                       help="periodic-orbit nonexistence criteria")
    p.add_argument("file")
    p.add_argument("--plane", help="great-circle plane normal a,b,c "
                                   "(uses the central-chart criterion)")
    p.set_defaults(func=cmd_nocycles)

    p = sub.add_parser("hopf", help="parameter scan for eigenvalue "
                                    "crossings and limit cycles")
    p.add_argument("file")
    p.add_argument("--param", required=True)
    p.add_argument("--range", required=True, metavar="lo:hi:n")
    p.add_argument("--svg", help="write a bifurcation diagram")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_hopf)

    p = sub.add_parser("conjecture",
                       help="experimental limit-cycle search over random "
                            "weak-focus family members")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("integrate", help="integrate and dump CSV")
    p.add_argument("file")
    p.add_argument("--from", dest="start", required=True, metavar="x,y,z")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.set_defaults(func=cmd_integrate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NotTangent, PreconditionViolated, NotInScope,
            BranchCoordinateZero, FieldError, families.FamilyConstraint
            ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except AssertionError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
