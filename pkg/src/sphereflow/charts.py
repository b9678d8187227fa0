"""Planar charts: central projection onto tangent planes and stereographic
projection from a pole.

Both projections turn a homogeneous tangent field on the sphere into a
polynomial field on the plane, up to a positive time reparametrization.  The
three coordinate branches of each chart cover poles in any position; the
branch picks which pair of plane coordinates parametrizes the projection
plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import scalars
from .polyalg import Poly, poly_from_records, poly_to_records
from .scalars import is_zero, normalize
from .spherefield import HomVectorField


@dataclass(frozen=True)
class ChartSpec:
    kind: str                # "central" | "stereo"
    basepoint: tuple         # unit vector (a, b, c), exact scalars preferred
    branch: str = ""         # "a" | "b" | "c"; default: largest coordinate

    def __post_init__(self):
        if self.kind not in ("central", "stereo"):
            raise ValueError(f"unknown chart kind {self.kind!r}")
        if len(self.basepoint) != 3:
            raise ValueError("basepoint must be a 3-vector")
        if not self.branch:
            mags = [abs(scalars.to_float(v)) for v in self.basepoint]
            object.__setattr__(self, "branch", "abc"[mags.index(max(mags))])
        if self.branch not in ("a", "b", "c"):
            raise ValueError(f"unknown branch {self.branch!r}")
        i = "abc".index(self.branch)
        if is_zero(self.basepoint[i]):
            raise ValueError(f"branch {self.branch!r} needs a nonzero "
                             f"{self.branch}-coordinate")


@dataclass
class PlanarSystem:
    """du/ds = pu(u, v), dv/ds = pv(u, v), in chart coordinates.

    `time_note` records the positive factor relating the chart time s to the
    spherical time t; it never affects orbits or their orientation.
    """

    pu: Poly
    pv: Poly
    chart: ChartSpec | None = None
    time_note: str = ""

    def eval_float(self, point):
        return (self.pu.eval_float(point), self.pv.eval_float(point))

    def to_arrays(self):
        return (self.pu.to_arrays(), self.pv.to_arrays())

    def jacobian(self, point):
        """Exact Jacobian matrix at an exact point."""
        return [[normalize(self.pu.partial(0).eval(point)),
                 normalize(self.pu.partial(1).eval(point))],
                [normalize(self.pv.partial(0).eval(point)),
                 normalize(self.pv.partial(1).eval(point))]]

    def linear_part(self):
        return [[self.pu.coeff((1, 0)), self.pu.coeff((0, 1))],
                [self.pv.coeff((1, 0)), self.pv.coeff((0, 1))]]

    def to_json_obj(self, radicand: int | None = None) -> dict:
        obj = {"pu": poly_to_records(self.pu, radicand),
               "pv": poly_to_records(self.pv, radicand)}
        if radicand is not None:
            obj["radicand"] = radicand
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> "PlanarSystem":
        rad = obj.get("radicand")
        return cls(poly_from_records(obj["pu"], 2, rad),
                   poly_from_records(obj["pv"], 2, rad))


U = Poly.variable(2, 0)
V = Poly.variable(2, 1)


def central_images(chart: ChartSpec) -> list[Poly]:
    """Substitution images (x, y, z) -> polynomials in (u, v) for the central
    chart: the point of the tangent plane with chart coordinates (u, v)."""
    a, b, c = chart.basepoint
    if chart.branch == "c":
        return [U + a, V + b,
                Poly(2, {(0, 0): c, (1, 0): -a / _frac(c), (0, 1): -b / _frac(c)})]
    if chart.branch == "a":
        return [Poly(2, {(0, 0): a, (1, 0): -b / _frac(a), (0, 1): -c / _frac(a)}),
                U + b, V + c]
    return [U + a,
            Poly(2, {(0, 0): b, (1, 0): -a / _frac(b), (0, 1): -c / _frac(b)}),
            V + c]


def _frac(c):
    from fractions import Fraction

    if isinstance(c, int):
        return Fraction(c)
    return c


def central_project(X: HomVectorField, chart: ChartSpec) -> PlanarSystem:
    """Project the field through the center onto the tangent plane at the
    basepoint.  Orbits correspond up to a positive time factor."""
    if chart.kind != "central":
        raise ValueError("central_project needs a central chart")
    a, b, c = chart.basepoint
    images = central_images(chart)
    Pt, Qt, Rt = (p.substitute(images) for p in X.components())
    Kt = a * Pt + b * Qt + c * Rt
    if chart.branch == "c":
        pu, pv = Pt - (U + a) * Kt, Qt - (V + b) * Kt
    elif chart.branch == "a":
        pu, pv = Qt - (U + b) * Kt, Rt - (V + c) * Kt
    else:
        pu, pv = Pt - (U + a) * Kt, Rt - (V + c) * Kt
    note = f"ds = (sqrt(lambda)/|{chart.branch}|)^(1-m) dt, lambda the squared cone factor"
    return PlanarSystem(pu, pv, chart, note)


def stereo_images(chart: ChartSpec) -> list[Poly]:
    """Substitution images for the stereographic chart from the pole
    (a, b, c); the true sphere point is the image divided by lambda."""
    a, b, c = chart.basepoint
    one_uv = Poly(2, {(0, 0): 1, (2, 0): 1, (0, 2): 1})
    if chart.branch == "c":
        lam = one_uv * (c * c) + Poly(2, {(1, 0): a, (0, 1): b}) ** 2
        return [lam * a - (2 * c * c) * (a - U),
                lam * b - (2 * c * c) * (b - V),
                lam * c - (2 * c) * (Poly.constant(2, c * c) + a * U + b * V)]
    if chart.branch == "a":
        lam = one_uv * (a * a) + Poly(2, {(1, 0): b, (0, 1): c}) ** 2
        return [lam * a - (2 * a) * (Poly.constant(2, a * a) + b * U + c * V),
                lam * b - (2 * a * a) * (b - U),
                lam * c - (2 * a * a) * (c - V)]
    lam = one_uv * (b * b) + Poly(2, {(1, 0): a, (0, 1): c}) ** 2
    return [lam * a - (2 * b * b) * (a - U),
            lam * b - (2 * b) * (Poly.constant(2, b * b) + a * U + c * V),
            lam * c - (2 * b * b) * (c - V)]


def stereo_project(X: HomVectorField, chart: ChartSpec) -> PlanarSystem:
    """Project the field stereographically from the pole at the basepoint.

    The planar degree is 2m (m = field degree); it drops to 2m - 1 exactly
    when the pole itself is singular.
    """
    if chart.kind != "stereo":
        raise ValueError("stereo_project needs a stereo chart")
    a, b, c = chart.basepoint
    images = stereo_images(chart)
    Pt, Qt, Rt = (p.substitute(images) for p in X.components())
    Kt = a * Pt + b * Qt + c * Rt
    if chart.branch == "c":
        pu, pv = Pt + (U - a) * Kt, Qt + (V - b) * Kt
    elif chart.branch == "a":
        pu, pv = Qt + (U - b) * Kt, Rt + (V - c) * Kt
    else:
        pu, pv = Pt + (U - a) * Kt, Rt + (V - c) * Kt
    note = "ds = positive smooth factor dt (stereographic)"
    return PlanarSystem(pu, pv, chart, note)


def project_point(chart: ChartSpec, w) -> tuple[float, float]:
    """Chart coordinates of a sphere point (numeric)."""
    a, b, c = (scalars.to_float(v) for v in chart.basepoint)
    x, y, z = (float(v) for v in w)
    s = a * x + b * y + c * z
    if chart.kind == "central":
        if s <= 1e-12:
            raise ValueError("point not in the open hemisphere of the chart")
        q = (x / s, y / s, z / s)
    else:
        if abs(1.0 - s) < 1e-12:
            raise ValueError("point is the projection pole")
        q = ((x - s * a) / (1.0 - s), (y - s * b) / (1.0 - s),
             (z - s * c) / (1.0 - s))
    if chart.branch == "c":
        pair = (q[0] - a, q[1] - b) if chart.kind == "central" else (q[0], q[1])
    elif chart.branch == "a":
        pair = (q[1] - b, q[2] - c) if chart.kind == "central" else (q[1], q[2])
    else:
        pair = (q[0] - a, q[2] - c) if chart.kind == "central" else (q[0], q[2])
    return pair


def unproject_point(chart: ChartSpec, uv) -> tuple[float, float, float]:
    """Sphere point with the given chart coordinates (numeric)."""
    u, v = float(uv[0]), float(uv[1])
    if chart.kind == "central":
        imgs = central_images(chart)
    else:
        imgs = stereo_images(chart)
    w = [p.eval_float((u, v)) for p in imgs]
    n = math.sqrt(w[0] ** 2 + w[1] ** 2 + w[2] ** 2)
    return (w[0] / n, w[1] / n, w[2] / n)


def chart_roundtrip_check(chart: ChartSpec, points) -> float:
    """Max |unproject(project(p)) - p| over sample sphere points (skipping
    points outside the chart's domain)."""
    worst = 0.0
    for w in points:
        try:
            uv = project_point(chart, w)
        except ValueError:
            continue
        w2 = unproject_point(chart, uv)
        err = math.sqrt(sum((float(w[i]) - w2[i]) ** 2 for i in range(3)))
        worst = max(worst, err)
    return worst
