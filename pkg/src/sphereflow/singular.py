"""Singular points of degree-2 tangent fields.

For the 8-parameter normal form the field factors as (L, M, N) ^ (x, y, z)
with linear forms L, M, N, so singular points on the sphere are exactly the
unit eigenvectors of the 3x3 matrix A collecting those forms.  A real
eigenvalue with a 1-dimensional eigenspace contributes an antipodal pair of
isolated singularities; a 2-dimensional eigenspace contributes a great
circle of singularities.  Hence at most 6 isolated singular points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy

from . import scalars
from .polyalg import Poly
from .spherefield import (HomVectorField, QuadCoeffs, quad_field,
                          rotation_to_south_pole, to_quad_normal_form)


@dataclass
class LinearFormsLMN:
    """The linear forms with (P, Q, R) = (L, M, N) ^ (x, y, z)."""

    L: Poly
    M: Poly
    N: Poly


def linear_forms(qc: QuadCoeffs) -> LinearFormsLMN:
    return LinearFormsLMN(
        Poly(3, {(1, 0, 0): -qc.a7, (0, 1, 0): -qc.a8, (0, 0, 1): -qc.a6}),
        Poly(3, {(1, 0, 0): qc.a4, (0, 1, 0): qc.a5, (0, 0, 1): qc.a3}),
        Poly(3, {(1, 0, 0): -qc.a1, (0, 1, 0): -qc.a2}),
    )


def build_A(qc: QuadCoeffs):
    """Rows of the matrix whose unit eigenvectors are the singular points."""
    return [[-qc.a7, -qc.a8, -qc.a6],
            [qc.a4, qc.a5, qc.a3],
            [-qc.a1, -qc.a2, 0]]


@dataclass
class SingularityReport:
    point: tuple                      # float coordinates on the sphere
    exact_point: tuple | None         # exact coordinates when available
    eigenvalue: object                # eigenvalue of A along the point
    linearization: list               # 2x2 planar linearization (floats)
    trace: float
    det: float
    kind: str                         # saddle | node | focus |
                                      # center-or-weak-focus | semi-hyperbolic |
                                      # nilpotent | linearly-zero

    def to_json_obj(self) -> dict:
        lam = complex(self.eigenvalue) if self.eigenvalue is not None else None
        return {
            "point": [float(v) for v in self.point],
            "eigenvalue": None if lam is None else lam.real,
            "linearization": [[float(v) for v in row] for row in self.linearization],
            "trace": self.trace,
            "det": self.det,
            "kind": self.kind,
        }


@dataclass
class SingularSet:
    finite: bool
    points: list = field(default_factory=list)          # SingularityReport
    circles: list = field(default_factory=list)         # unit plane normals (float)
    whole_sphere: bool = False

    def to_json_obj(self) -> dict:
        return {
            "finite": self.finite,
            "count": len(self.points) if self.finite else None,
            "points": [p.to_json_obj() for p in self.points],
            "circles": [[float(v) for v in n] for n in self.circles],
            "whole_sphere": self.whole_sphere,
        }


def classify_linearization(trace: float, det: float, b, tol: float = 1e-9) -> str:
    """Topological label from a 2x2 linearization (numeric, tolerance tol)."""
    if abs(det) <= tol:
        if abs(trace) > tol:
            return "semi-hyperbolic"
        if max(abs(b[0][0]), abs(b[0][1]), abs(b[1][0]), abs(b[1][1])) > tol:
            return "nilpotent"
        return "linearly-zero"
    if det < 0:
        return "saddle"
    if abs(trace) <= tol:
        return "center-or-weak-focus"
    if trace * trace - 4 * det < -tol:
        return "focus"
    return "node"


def linearize_at(X: HomVectorField, p, exact: bool | None = None):
    """2x2 linearization of the chart system at the singular point p.

    Equals the upper-left block of O^T J(p) O where O rotates p to the south
    pole; exact when p has exact coordinates (set exact=False to force
    floats).
    """
    if exact is None:
        exact = all(scalars.is_exact(v) for v in p)
    if exact:
        M = rotation_to_south_pole(p)
        J = [[comp.partial(j).eval(p) for j in range(3)]
             for comp in X.components()]
        B = [[scalars.normalize(
            sum(M.m[k][i] * J[k][l] * M.m[l][j]
                for k in range(3) for l in range(3)))
            for j in range(2)] for i in range(2)]
        return B
    pf = np.array([float(v) for v in p], dtype=float)
    pf = pf / np.linalg.norm(pf)
    c3 = -pf
    i0 = int(np.argmin(np.abs(pf)))
    e = np.zeros(3)
    e[i0] = 1.0
    w = e - np.dot(e, c3) * c3
    c1 = w / np.linalg.norm(w)
    c2 = np.cross(c3, c1)
    O = np.column_stack([c1, c2, c3])
    J = np.array([[comp.partial(j).eval_float(pf) for j in range(3)]
                  for comp in X.components()])
    B = (O.T @ J @ O)[:2, :2]
    return [[B[0, 0], B[0, 1]], [B[1, 0], B[1, 1]]]


def _report_for_point(X: HomVectorField, pt, exact_pt, eigenvalue,
                      tol: float = 1e-9) -> SingularityReport:
    B = linearize_at(X, pt, exact=False)
    tr = B[0][0] + B[1][1]
    de = B[0][0] * B[1][1] - B[0][1] * B[1][0]
    kind = classify_linearization(tr, de, B, tol)
    return SingularityReport(tuple(float(v) for v in pt), exact_pt,
                             eigenvalue, B, tr, de, kind)


def enumerate_singularities(X: HomVectorField, tol: float = 1e-9) -> SingularSet:
    """All singular points of a degree-2 tangent field via the eigenstructure
    of A (exact eigen decisions, float reports)."""
    qc = to_quad_normal_form(X)
    if all(scalars.is_zero(v) for v in qc):
        return SingularSet(finite=False, whole_sphere=True)
    A = sympy.Matrix([[scalars.to_sympy(v) for v in row] for row in build_A(qc)])
    out = SingularSet(finite=True)
    for lam, _mult, vecs in A.eigenvects():
        if lam.is_real is False:
            continue
        if lam.is_real is None:
            # Real cubic roots may be written with complex radicals; their
            # numeric imaginary part is then roundoff, not a genuine one.
            lv = complex(lam.evalf(30, chop=True))
            if abs(lv.imag) > 1e-12 * (1.0 + abs(lv)):
                continue
        if len(vecs) == 1:
            vec = np.array([complex(v.evalf(30, chop=True)).real
                            for v in vecs[0]], dtype=float)
            vec = vec / np.linalg.norm(vec)
            exact_pt = _exact_unit(vecs[0])
            lam_f = complex(lam.evalf(30, chop=True)).real
            for s, ept in ((1.0, exact_pt), (-1.0, _neg(exact_pt))):
                pt = tuple(s * vec)
                out.points.append(_report_for_point(X, pt, ept, lam_f, tol))
        else:
            # 2- or 3-dim eigenspace: a great circle (or sphere) of singularities
            out.finite = False
            if len(vecs) >= 3:
                out.whole_sphere = True
                continue
            v1 = np.array([complex(v.evalf()).real for v in vecs[0]], dtype=float)
            v2 = np.array([complex(v.evalf()).real for v in vecs[1]], dtype=float)
            n = np.cross(v1, v2)
            n = n / np.linalg.norm(n)
            out.circles.append(tuple(n))
    if not out.finite:
        out.points = [r for r in out.points
                      if not any(abs(sum(r.point[i] * c[i] for i in range(3))) < tol
                                 for c in out.circles) or out.whole_sphere]
        out.points = [r for r in out.points if not out.whole_sphere]
    out.points.sort(key=lambda r: r.point)
    return out


def _exact_unit(vec_sym):
    """Exact unit vector from a sympy eigenvector when entries are rational."""
    vals = list(vec_sym)
    if not all(v.is_Rational for v in vals):
        return None
    fr = [Fraction(int(v.p), int(v.q)) for v in vals]
    n2 = sum(f * f for f in fr)
    n = scalars.exact_sqrt(n2)
    if isinstance(n, (int, Fraction)):
        return tuple(scalars.normalize(f / n) for f in fr)
    return tuple(scalars.normalize(scalars.to_sympy(f) / n) for f in fr)


def _neg(p):
    return None if p is None else tuple(scalars.normalize(-v) for v in p)


def brute_force_singularities(X: HomVectorField, grid_n: int = 20,
                              newton_iters: int = 40, tol: float = 1e-11,
                              dedup_tol: float = 1e-7) -> list[tuple]:
    """Independent numeric enumeration: Newton iteration constrained to the
    sphere from a spherical Fibonacci grid, deduplicated."""
    arrays = X.to_arrays()

    def evalX(pt):
        return np.array([_eval_arrays(a, pt) for a in arrays])

    def jac(pt):
        return np.array([[comp.partial(j).eval_float(pt) for j in range(3)]
                         for comp in X.components()])

    n_pts = grid_n * grid_n
    golden = (1 + 5 ** 0.5) / 2
    seeds = []
    for i in range(n_pts):
        zc = 1 - 2 * (i + 0.5) / n_pts
        r = math.sqrt(max(0.0, 1 - zc * zc))
        th = 2 * math.pi * i / golden
        seeds.append(np.array([r * math.cos(th), r * math.sin(th), zc]))
    found = []
    for s in seeds:
        pt = s.copy()
        ok = False
        for _ in range(newton_iters):
            F = evalX(pt)
            if np.linalg.norm(F) < tol:
                ok = True
                break
            A = np.vstack([jac(pt), pt[None, :]])
            b = np.concatenate([-F, [0.0]])
            step, *_ = np.linalg.lstsq(A, b, rcond=None)
            if not np.all(np.isfinite(step)):
                break
            pt = pt + step
            nrm = np.linalg.norm(pt)
            if nrm < 1e-12:
                break
            pt = pt / nrm
            if np.linalg.norm(step) < 1e-15:
                ok = np.linalg.norm(evalX(pt)) < tol
                break
        if ok:
            if not any(np.linalg.norm(pt - q) < dedup_tol for q in found):
                found.append(pt)
    found.sort(key=lambda q: (round(q[0], 9), round(q[1], 9), round(q[2], 9)))
    return [tuple(q) for q in found]


def _eval_arrays(arr, pt):
    exps, coefs = arr
    if len(coefs) == 0:
        return 0.0
    return float(np.sum(coefs * np.prod(pt[None, :] ** exps, axis=1)))
