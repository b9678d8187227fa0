"""Global qualitative analysis of tangent fields on the sphere.

Provides the periodic-orbit nonexistence criteria (stereographic and central
versions), an exact-or-honest sign-definiteness decision procedure, great
circle tangency counting, the case reduction of saddle-at-the-pole fields to
three canonical families, phase-portrait classification, and verifiers for
rotated families and inverse integrating factors.

Sign decisions that feed a "no periodic orbits" conclusion are only ever made
through structural certificates (monomial squares, quadratic forms,
even-power sums and their combinations); grid sampling can refute
definiteness with exact witnesses but never certify it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy

from . import scalars
from .charts import ChartSpec, PlanarSystem, central_images, central_project
from .polyalg import Poly
from .scalars import is_zero, normalize, sign_of
from .singular import build_A, enumerate_singularities
from .spherefield import (HomVectorField, NotTangent, QuadCoeffs, Rotation3,
                          is_tangent, quad_field, rotate,
                          rotation_to_south_pole, to_quad_normal_form)

U = Poly.variable(2, 0)
V = Poly.variable(2, 1)

SAMPLE_RANGE = 10.0
SAMPLE_POINTS = 201


class BranchCoordinateZero(ValueError):
    """The requested chart branch needs a nonzero plane coordinate."""


class NotInScope(ValueError):
    """The field falls outside the reduction's precondition (degenerate or
    center configurations are handled by the local analysis instead)."""


# ---------------------------------------------------------------------------
# Sign definiteness
# ---------------------------------------------------------------------------

@dataclass
class SignStatus:
    """Outcome of the "does not change sign" decision for a 2-variable
    polynomial.  `witnesses` (for Indefinite) holds two (point, value) pairs
    with exactly verified opposite strict signs."""

    status: str                      # PSD | NSD | Indefinite | Unknown
    certificate: str | None = None
    witnesses: tuple | None = None

    @property
    def semidefinite(self) -> bool:
        return self.status in ("PSD", "NSD")

    def to_json_obj(self) -> dict:
        obj = {"status": self.status, "certificate": self.certificate}
        if self.witnesses:
            obj["witnesses"] = [
                {"point": [str(c) for c in pt], "value": str(val)}
                for pt, val in self.witnesses]
        return obj


def _even_sign_certificate(p: Poly) -> SignStatus | None:
    """All exponents even and coefficients of one sign: semidefinite."""
    if any(e0 % 2 or e1 % 2 for (e0, e1) in p.terms):
        return None
    signs = {sign_of(c) for c in p.terms.values()}
    if signs <= {1, 0}:
        return SignStatus("PSD", "even exponents with nonnegative coefficients")
    if signs <= {-1, 0}:
        return SignStatus("NSD", "even exponents with nonpositive coefficients")
    return None


def _quadratic_form_certificate(p: Poly) -> SignStatus | None:
    """Exact eigen-sign decision for a homogeneous quadratic form."""
    if p.is_zero() or not p.is_homogeneous() or p.degree() != 2:
        return None
    A = p.coeff((2, 0))
    B = p.coeff((1, 1))
    C = p.coeff((0, 2))
    disc = normalize(B * B - 4 * A * C)
    sd = sign_of(disc)
    lead = A if not is_zero(A) else C
    if sd < 0:
        return SignStatus("PSD" if sign_of(lead) > 0 else "NSD",
                          "definite quadratic form (negative discriminant)")
    if sd == 0:
        return SignStatus("PSD" if sign_of(lead) > 0 else "NSD",
                          "semidefinite quadratic form (zero discriminant)")
    return SignStatus("Indefinite",
                      "quadratic form with positive discriminant",
                      _quadratic_form_witnesses(p, A, B, C))


def _quadratic_form_witnesses(p: Poly, A, B, C):
    """Two exact points where an indefinite quadratic form takes strictly
    opposite signs."""
    if is_zero(A) and is_zero(C):
        pts = [(1, 1), (1, -1)]
    else:
        # anchor at an axis point of sign(lead); probe rational slopes near a
        # real root of the dehomogenized quadratic for the opposite sign
        swap = is_zero(A)
        anchor = (0, 1) if swap else (1, 0)
        a_, b_ = (C, B) if swap else (A, B)
        c_ = A if swap else C
        af, bf, cf = (scalars.to_float(v) for v in (a_, b_, c_))
        root = (-bf + (bf * bf - 4 * af * cf) ** 0.5) / (2 * af)
        anchor_sign = sign_of(normalize(p.eval(anchor)))
        pts = [anchor]
        for probe in _rational_probes(root):
            pt = (1, probe) if swap else (probe, 1)
            if sign_of(normalize(p.eval(pt))) * anchor_sign < 0:
                pts.append(pt)
                break
    w = [(pt, normalize(p.eval(pt))) for pt in pts[:2]]
    if len(w) == 2 and sign_of(w[0][1]) * sign_of(w[1][1]) < 0:
        return tuple(w)
    return None


def _rational_probes(x: float, n: int = 24):
    """Rational points marching outward around a float location."""
    base = Fraction(x).limit_denominator(10 ** 6)
    for k in range(n):
        step = Fraction(1, 2 ** 10) * (2 ** k)
        yield base + step
        yield base - step


def _structural(p: Poly) -> SignStatus | None:
    st = _even_sign_certificate(p)
    if st is not None:
        return st
    return _quadratic_form_certificate(p)


def _grid_values(p: Poly, G: float = SAMPLE_RANGE, n: int = SAMPLE_POINTS):
    exps, coeffs = p.to_arrays()
    xs = np.linspace(-G, G, n)
    Ug, Vg = np.meshgrid(xs, xs)
    vals = np.zeros_like(Ug)
    for (e0, e1), c in zip(exps, coeffs):
        vals += float(c) * Ug ** int(e0) * Vg ** int(e1)
    return xs, vals


def _exact_grid_point(xs, idx):
    i, j = idx
    return (Fraction(-10) + Fraction(20, len(xs) - 1) * int(j),
            Fraction(-10) + Fraction(20, len(xs) - 1) * int(i))


def sign_definiteness(p: Poly) -> SignStatus:
    """Decide whether p keeps one sign on the plane.

    PSD/NSD come only from structural certificates; sampling produces
    Indefinite with exactly-confirmed witnesses, otherwise Unknown.
    """
    if p.is_zero():
        return SignStatus("PSD", "zero polynomial")
    st = _structural(p)
    if st is not None:
        return st
    # sum of semidefinite homogeneous parts, all pointing one way
    parts = [p.homogeneous_part(d) for d in range(p.degree() + 1)]
    stats = [_structural(q) for q in parts if not q.is_zero()]
    if all(s is not None and s.status == "PSD" for s in stats):
        return SignStatus("PSD", "every homogeneous part is PSD")
    if all(s is not None and s.status == "NSD" for s in stats):
        return SignStatus("NSD", "every homogeneous part is NSD")
    # sampling refutation
    xs, vals = _grid_values(p)
    imax = np.unravel_index(int(np.argmax(vals)), vals.shape)
    imin = np.unravel_index(int(np.argmin(vals)), vals.shape)
    if vals[imax] > 0 and vals[imin] < 0:
        p_pos = _exact_grid_point(xs, imax)
        p_neg = _exact_grid_point(xs, imin)
        v_pos = normalize(p.eval(p_pos))
        v_neg = normalize(p.eval(p_neg))
        if sign_of(v_pos) > 0 and sign_of(v_neg) < 0:
            return SignStatus("Indefinite", "sampled witnesses, confirmed exactly",
                              ((p_pos, v_pos), (p_neg, v_neg)))
    return SignStatus("Unknown", "no structural certificate; sampling found "
                                 "no sign change")


# ---------------------------------------------------------------------------
# Periodic-orbit nonexistence criteria
# ---------------------------------------------------------------------------

@dataclass
class NoCyclesVerdict:
    conclusion: str                       # NoPeriodicOrbits | Inconclusive
    criterion: str | None = None
    witness: Poly | None = None
    witness_sign: SignStatus | None = None
    assumptions: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_json_obj(self) -> dict:
        return {
            "conclusion": self.conclusion,
            "criterion": self.criterion,
            "witness": None if self.witness is None else repr(self.witness),
            "witness_sign": None if self.witness_sign is None
            else self.witness_sign.to_json_obj(),
            "assumptions": list(self.assumptions),
            "checks": {k: (v.to_json_obj() if isinstance(v, SignStatus) else v)
                       for k, v in self.checks.items()},
            "notes": list(self.notes),
        }


_STEREO_IMAGES = [Poly(2, {(1, 0): 2}), Poly(2, {(0, 1): 2}),
                  Poly(2, {(2, 0): 1, (0, 2): 1, (0, 0): -1})]


def _zero_set_transversal_signs(rt: Poly, g: Poly, G: float = SAMPLE_RANGE,
                                n: int = SAMPLE_POINTS) -> set:
    """Signs of g at sampled points of {rt = 0} (float refutation only)."""
    xs, vals = _grid_values(rt, G, n)
    signs = set()
    flips = np.where(np.sign(vals[:, :-1]) * np.sign(vals[:, 1:]) < 0)
    for i, j in zip(*flips):
        lo, hi = xs[j], xs[j + 1]
        y = xs[i]
        flo = rt.eval_float((lo, y))
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            fm = rt.eval_float((mid, y))
            if flo * fm <= 0:
                hi = mid
            else:
                lo, flo = mid, fm
        gv = g.eval_float((0.5 * (lo + hi), y))
        if abs(gv) > 1e-9:
            signs.add(1 if gv > 0 else -1)
    return signs


def nocycles_stereo(X: HomVectorField) -> NoCyclesVerdict:
    """Sign criteria in the stereographic chart from the pole (0, 0, 1).

    Criterion (a): the projected third component keeps one sign.
    Criterion (b): the transversality function along its zero set does.
    """
    if not is_tangent(X):
        raise NotTangent("field is not tangent to the sphere")
    P, Q, R = X.components()
    rt = R.substitute(_STEREO_IMAGES)
    assumptions = []
    if X.degree % 2 == 0:
        assumptions.append("side condition discharged: even degree "
                           "(antipodal points map to one orbit)")
    elif all(is_zero(normalize(c.eval((0, 0, 1)))) for c in X.components()):
        assumptions.append("side condition discharged: the projection pole "
                           "is a singular point")
    else:
        assumptions.append("assumed: no periodic orbit passes through the "
                           "projection pole (0, 0, 1)")
    if rt.is_zero():
        return NoCyclesVerdict("Inconclusive", assumptions=assumptions,
                               notes=["projected third component vanishes "
                                      "identically; the equator plane is "
                                      "invariant"])
    st = sign_definiteness(rt)
    if st.semidefinite:
        return NoCyclesVerdict("NoPeriodicOrbits", "StereoSign(a)", rt, st,
                               assumptions)
    pt = P.substitute(_STEREO_IMAGES)
    qt = Q.substitute(_STEREO_IMAGES)
    g = pt * rt.partial(0) + qt * rt.partial(1)
    sg = sign_definiteness(g)
    if sg.semidefinite:
        return NoCyclesVerdict("NoPeriodicOrbits", "StereoTransversal(b)", g,
                               sg, assumptions)
    notes = []
    zsigns = _zero_set_transversal_signs(rt, g)
    if len(zsigns) == 2:
        notes.append("transversality function changes sign on sampled points "
                     "of the zero set")
    return NoCyclesVerdict("Inconclusive", witness=rt, witness_sign=st,
                           assumptions=assumptions,
                           checks={"transversality_sign": sg}, notes=notes)


_BRANCHES = {1: ("c", 2, "a", "b"), 2: ("a", 0, "c", "d"), 3: ("b", 1, "e", "f")}


def _unit_plane(plane):
    a, b, c = (normalize(v) for v in plane)
    n2 = normalize(a * a + b * b + c * c)
    if is_zero(n2):
        raise ValueError("plane normal must be nonzero")
    if not is_zero(normalize(n2 - 1)):
        ln = scalars.exact_sqrt(n2)
        a, b, c = (normalize(scalars.div(v, ln)) for v in (a, b, c))
    return a, b, c


def nocycles_central(X: HomVectorField, plane, branch: int | None = None
                     ) -> NoCyclesVerdict:
    """Sign criteria for orbits crossing the great circle of `plane`, using
    the central charts at the plane's unit normal.

    The caller asserts that no periodic orbit intersects that great circle;
    the verdict records the assumption.  `branch` in {1, 2, 3} forces one
    chart branch (needing c, a, b nonzero respectively); by default every
    admissible branch is tried until one is conclusive.
    """
    if not is_tangent(X):
        raise NotTangent("field is not tangent to the sphere")
    abc = _unit_plane(plane)
    if branch is not None:
        _, idx, _, _ = _BRANCHES[branch]
        if is_zero(abc[idx]):
            raise BranchCoordinateZero(
                f"branch {branch} needs coordinate {'abc'[idx]} nonzero")
        branches = [branch]
    else:
        branches = [i for i in (1, 2, 3) if not is_zero(abc[_BRANCHES[i][1]])]
        if not branches:
            raise ValueError("degenerate plane normal")
    P, Q, R = X.components()
    K = scalars_mul(P, abc[0]) + scalars_mul(Q, abc[1]) + scalars_mul(R, abc[2])
    assumptions = ["assumed: no periodic orbit intersects the great circle "
                   "of the given plane (holds for degree 2 by convexity of "
                   "the crossing set)"]
    last = None
    for i in branches:
        letter, _, sign_tok, trans_tok = _BRANCHES[i]
        ch = ChartSpec("central", abc, letter)
        im = central_images(ch)
        kt = K.substitute(im)
        planar = central_project(X, ch)
        fi = im[0] * im[0] + im[1] * im[1] + im[2] * im[2]
        fst = sign_definiteness(fi - Poly.constant(2, 1))
        checks = {"f_positive": fst.status == "PSD",
                  "cofactor_identity": (
                      planar.pu * fi.partial(0) + planar.pv * fi.partial(1)
                      + 2 * kt * fi).is_zero()}
        if kt.is_zero():
            last = NoCyclesVerdict("Inconclusive", assumptions=assumptions,
                                   checks=checks,
                                   notes=[f"branch {i}: projected plane "
                                          "polynomial vanishes identically"])
            continue
        st = sign_definiteness(kt)
        if st.semidefinite:
            return NoCyclesVerdict("NoPeriodicOrbits",
                                   f"CentralSign({sign_tok})", kt, st,
                                   assumptions, checks)
        g = planar.pu * kt.partial(0) + planar.pv * kt.partial(1)
        sg = sign_definiteness(g)
        if sg.semidefinite:
            return NoCyclesVerdict("NoPeriodicOrbits",
                                   f"CentralTransversal({trans_tok})", g, sg,
                                   assumptions, checks)
        last = NoCyclesVerdict("Inconclusive", witness=kt, witness_sign=st,
                               assumptions=assumptions,
                               checks={**checks, "transversality_sign": sg})
    return last


def scalars_mul(p: Poly, c) -> Poly:
    return p.map_coeffs(lambda v: normalize(v * c))


# ---------------------------------------------------------------------------
# Tangency counting on great circles
# ---------------------------------------------------------------------------

def tangency_count(X: HomVectorField, plane) -> tuple:
    """Count tangency points of the orbits with the great circle of `plane`.

    Returns ("Invariant", None) when the circle is formed by orbits, else
    ("Count", k) with k <= 2n for a degree-n field.
    """
    if not is_tangent(X):
        raise NotTangent("field is not tangent to the sphere")
    n_vec = _unit_plane(plane)
    M = rotation_to_south_pole(n_vec)
    e1, e2 = M.column(0), M.column(1)
    P, Q, R = X.components()
    K = (scalars_mul(P, n_vec[0]) + scalars_mul(Q, n_vec[1])
         + scalars_mul(R, n_vec[2]))
    # restrict to cos(t)*e1 + sin(t)*e2 as a polynomial in (cos, sin)
    images = [Poly(2, {(1, 0): e1[i], (0, 1): e2[i]}) for i in range(3)]
    q = K.substitute(images)
    if q.is_zero():
        return ("Invariant", None)
    n = X.degree
    # rational parameterization w = tan(t/2): cos = 1-w^2, sin = 2w (up to
    # the positive factor (1+w^2)^-1 which never vanishes)
    wpoly = {}
    for (ec, es), c in q.terms.items():
        # (1-w^2)^ec * (2w)^es * (1+w^2)^(n-ec-es)
        rest = n - ec - es
        base = _poly1_mul(_poly1_pow({0: 1, 2: -1}, ec),
                          _poly1_pow({1: 2}, es))
        base = _poly1_mul(base, _poly1_pow({0: 1, 2: 1}, rest))
        for e, v in base.items():
            wpoly[e] = normalize(wpoly.get(e, 0) + c * v)
    wpoly = {e: v for e, v in wpoly.items() if not is_zero(v)}
    count = _count_distinct_real_roots(wpoly)
    deg = max(wpoly) if wpoly else -1
    if deg < 2 * n:                      # zero at the w = infinity endpoint
        count += 1
    return ("Count", count)


def _poly1_pow(p: dict, k: int) -> dict:
    out = {0: 1}
    for _ in range(k):
        out = _poly1_mul(out, p)
    return out


def _poly1_mul(a: dict, b: dict) -> dict:
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            out[ea + eb] = out.get(ea + eb, 0) + ca * cb
    return out


def _count_distinct_real_roots(wpoly: dict) -> int:
    if not wpoly or max(wpoly) == 0:
        return 0
    w = sympy.Symbol("w", real=True)
    if all(scalars.is_rational(c) for c in wpoly.values()):
        expr = sum(scalars.to_sympy(c) * w ** e for e, c in wpoly.items())
        sq = sympy.Poly(expr, w, domain="QQ")
        # square-free part, then Sturm count of distinct real roots
        sqf = sq.quo(sympy.Poly(sympy.gcd(sq, sq.diff(w)), w, domain="QQ"))
        return sqf.count_roots()
    coeffs = np.zeros(max(wpoly) + 1)
    for e, c in wpoly.items():
        coeffs[max(wpoly) - e] = scalars.to_float(c)
    roots = np.roots(coeffs)
    scale = max(1.0, np.abs(roots).max()) if len(roots) else 1.0
    real = [r.real for r in roots if abs(r.imag) <= 1e-8 * scale]
    real.sort()
    out = []
    for r in real:
        if not out or abs(r - out[-1]) > 1e-7 * scale:
            out.append(r)
    return len(out)


# ---------------------------------------------------------------------------
# Case reduction to canonical families
# ---------------------------------------------------------------------------

@dataclass
class ReductionResult:
    target: str                          # Family142 | Family143 | Family144 |
                                         # CircleOfSingularities | DegenerateCase
    rotation: Rotation3
    coeffs: QuadCoeffs
    constants: dict = field(default_factory=dict)
    chain: list = field(default_factory=list)

    def to_json_obj(self) -> dict:
        return {
            "target": self.target,
            "rotation": [[str(v) for v in row] for row in self.rotation.m],
            "coeffs": {f"a{i}": str(v)
                       for i, v in enumerate(self.coeffs, start=1)},
            "constants": {k: str(v) for k, v in self.constants.items()},
            "chain": list(self.chain),
        }


_IDENTITY = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
_SWAP_XY = ((0, 1, 0), (1, 0, 0), (0, 0, 1))


def _mat_mul(A, B):
    return tuple(tuple(normalize(sum(A[i][k] * B[k][j] for k in range(3)))
                       for j in range(3)) for i in range(3))


def _sqrt(x):
    return scalars.exact_sqrt(normalize(x))


def case_reduce(qc: QuadCoeffs) -> ReductionResult:
    """Reduce a chart-aligned field with a saddle at the poles to one of the
    canonical families by explicit orthogonal changes of variables.

    Requires a3 = a6 = 0 and a4*a8 - a5*a7 < 0 (the poles are saddles); other
    configurations raise NotInScope and are handled by the local analysis.
    """
    a1, a2, a3, a4, a5, a6, a7, a8 = qc
    if not (is_zero(a3) and is_zero(a6)):
        raise NotInScope("chart-aligned coefficients required (a3 = a6 = 0)")
    if sign_of(normalize(a4 * a8 - a5 * a7)) >= 0:
        raise NotInScope("the pole singularity is not a saddle")
    chain: list = []
    constants: dict = {}
    rot = _IDENTITY
    cur = qc
    for _ in range(6):                    # the reduction strictly shrinks
        step = _dispatch_case(cur)
        if step is None:
            break
        case_id, mat, consts = step
        chain.append(case_id)
        constants.update(consts)
        if mat is not None:
            rot = _mat_mul(rot, mat)
            cur = to_quad_normal_form(
                rotate(quad_field(cur), Rotation3(mat, check=False)))
        if case_id in ("C1-complex", "C6-complex"):
            return ReductionResult("DegenerateCase", Rotation3(rot), cur,
                                   constants, chain)
    target = _terminal_target(cur)
    rotation = Rotation3(rot)            # validates orthogonality exactly
    return ReductionResult(target, rotation, cur, constants, chain)


def _dispatch_case(qc: QuadCoeffs):
    """One reduction step: (case id, matrix or None, constants) or None when
    the coefficients already match a terminal family pattern."""
    a1, a2, a3, a4, a5, a6, a7, a8 = qc
    s = normalize(a5 + a7)
    if is_zero(a4):
        if not is_zero(a1):
            return None                   # Family142 / Family144 pattern
        if not is_zero(a2):
            return ("C3", _case3_matrix(a5, a7, a8), {})
        return None                       # Family143 pattern
    if is_zero(a8):
        return ("C8", _SWAP_XY, {})
    if is_zero(a1) and is_zero(a2):
        if is_zero(s):
            return ("C6-axis", _case6_axis_matrix(a4, a5, a8), {})
        alpha = normalize(s * s - 4 * a4 * a8)
        consts = _case6_constants(a4, a5, a7, a8)
        if sign_of(alpha) < 0:
            return ("C6-complex", None, {"alpha": alpha})
        return ("C6", _case6_matrix(a4, a5, a7, a8), consts)
    if not is_zero(a1) and is_zero(normalize(a1 * a1 * a8 - a2 * (a1 * s - a2 * a4))):
        return ("C7", _case7_matrix(a1, a2, a4, a5, a7), {})
    alpha = normalize(s * s - 4 * a4 * a8)
    if sign_of(alpha) < 0:
        return ("C1-complex", None, {"alpha": alpha})
    return ("C1", _case1_matrix(a4, a5, a7, a8), {"alpha": alpha})


def _terminal_target(qc: QuadCoeffs) -> str:
    a1, a2, a3, a4, a5, a6, a7, a8 = qc
    s = normalize(a5 + a7)
    X = quad_field(qc)
    if not enumerate_singularities(X).finite:
        return "CircleOfSingularities"
    if not is_zero(a1):
        if is_zero(normalize(a1 * a8 - a2 * s)):
            return "Family144"            # via the a4 = 0 locked-a8 pattern
        return "Family142"
    if not is_zero(a2):
        # rotate a2 into a1: one more explicit orthogonal change
        raise NotInScope("unreduced a2-only pattern")  # pragma: no cover
    return "Family143"


def _case1_matrix(a4, a5, a7, a8):
    s = normalize(a5 + a7)
    sq = _sqrt(s * s - 4 * a4 * a8)
    D = _sqrt((s + sq) ** 2 + 4 * a8 * a8)
    m00 = normalize(scalars.div(-2 * a8, D))
    m01 = normalize(scalars.div(s + sq, D))
    return ((m00, m01, 0), (m01, normalize(-m00), 0), (0, 0, 1))


def _case6_constants(a4, a5, a7, a8):
    s = normalize(a5 + a7)
    alpha = normalize(s * s - 4 * a4 * a8)
    delta = normalize(s * s + (a4 - a8) ** 2)
    sigma = normalize(s * s * alpha)
    beta = normalize(s * s + 2 * a4 * (a4 - a8) - _sqrt(sigma)) \
        if sign_of(alpha) >= 0 else None
    gamma = normalize(s * s * (a5 * a5 + a7 * a7 - 2 * a4 * a8)
                      + (a7 * a7 - a5 * a5) * _sqrt(sigma)) \
        if sign_of(alpha) >= 0 else None
    out = {"alpha": alpha, "delta": delta, "sigma": sigma}
    if beta is not None:
        out["beta"] = beta
        out["gamma"] = gamma
    return out


def _case6_matrix(a4, a5, a7, a8):
    s = normalize(a5 + a7)
    c = _case6_constants(a4, a5, a7, a8)
    delta, sigma, beta, gamma = c["delta"], c["sigma"], c["beta"], c["gamma"]
    rs = _sqrt(sigma)
    a = scalars.div(normalize(s * s * (a4 + a8) + (a4 - a8) * rs),
                    normalize(s * _sqrt(2 * delta * beta)))
    b = scalars.div(
        normalize(s * (a5 * s * s - a4 * (a8 * (3 * a5 + a7) + a4 * (a7 - a5)))
                  - (a4 * (a4 - a8) + a5 * s) * rs),
        _sqrt(normalize(delta * beta * gamma)))
    d = normalize(-scalars.div(_sqrt(beta), _sqrt(2 * delta)))
    e = scalars.div(
        normalize(s * (a4 * (2 * a8 * (a4 - a8) - a7 * s) + a5 * a8 * s)
                  - (a7 * a4 + a5 * a8) * rs),
        _sqrt(normalize(delta * beta * gamma)))
    return ((normalize(a), normalize(b), 0),
            (normalize(d), normalize(e), 0), (0, 0, 1))


def _case6_axis_matrix(a4, a5, a8):
    # a5 + a7 = 0 branch; here a4*a8 < 0 so both radicands are positive
    s1 = _sqrt(a8 * a8 - a4 * a8)
    s2 = _sqrt(a4 * a4 - a4 * a8)
    inner = normalize(a5 * (a4 - a8) + _sqrt(-(a4 - a8) ** 2 * a4 * a8))
    den = _sqrt(normalize(inner * inner))
    a = scalars.div(s1, normalize(a4 - a8))
    b = scalars.div(normalize(a4 * s1 + a5 * s2), den)
    d = scalars.div(s2, normalize(a4 - a8))
    e = scalars.div(normalize(a8 * s2 - a5 * s1), den)
    return ((normalize(a), normalize(b), 0),
            (normalize(d), normalize(e), 0), (0, 0, 1))


def _case7_matrix(a1, a2, a4, a5, a7):
    s = normalize(a5 + a7)
    G = _sqrt(normalize((a1 * s - a2 * a4) ** 2 + a1 * a1 * a4 * a4))
    m00 = normalize(scalars.div(normalize(a2 * a4 - a1 * s), G))
    m01 = normalize(scalars.div(normalize(a4 * a1), G))
    return ((m00, m01, 0), (m01, normalize(-m00), 0), (0, 0, 1))


def _case3_matrix(a5, a7, a8):
    s = normalize(a5 + a7)
    E = _sqrt(normalize(s * s + a8 * a8))
    m00 = normalize(scalars.div(normalize(-a8), E))
    m01 = normalize(scalars.div(s, E))
    return ((m00, m01, 0), (m01, normalize(-m00), 0), (0, 0, 1))


# ---------------------------------------------------------------------------
# Phase portrait classification
# ---------------------------------------------------------------------------

PORTRAIT_LABELS = [
    "Fig3_LinearlyZero",
    "Fig2a_SingularCircle",
    "Fig2b_SingularCircle",
    "Fig31_NilpotentCusp",
    "Fig32_NilpotentCuspA2Zero",
    "Fig33a",
    "Fig33b",
    "Fig33c_CenterFoci",
    "Fig35_TripleCenterPair",
    "Fig36_SaddleNodes",
    "Fig37_TwoSingularities",
    "Fig38_SaddleNodesFoci",
    "Fig41_Nondegenerate",
]


@dataclass
class PortraitClass:
    label: str
    subtype: str | None = None
    modulo_limit_cycles: bool = False
    notes: list = field(default_factory=list)

    @property
    def full_label(self) -> str:
        if self.subtype:
            return f"{self.label}({self.subtype})"
        return self.label

    def to_json_obj(self) -> dict:
        return {"label": self.label, "subtype": self.subtype,
                "full_label": self.full_label,
                "modulo_limit_cycles": self.modulo_limit_cycles,
                "notes": list(self.notes)}


def _exact_unit_sympy(vec) -> tuple:
    vs = [sympy.together(scalars.to_sympy(v)) for v in vec]
    norm = sympy.sqrt(sum(v * v for v in vs))
    return tuple(normalize(sympy.radsimp(v / norm)) for v in vs)


def _real_eigendata(A: sympy.Matrix):
    """(eigenvalue, [exact unit vectors]) for real eigenvalues."""
    out = []
    for lam, _mult, vecs in A.eigenvects():
        if lam.is_real is False:
            continue
        if lam.is_real is None:
            lv = complex(lam.evalf(30, chop=True))
            if abs(lv.imag) > 1e-12 * (1.0 + abs(lv)):
                continue
        out.append((lam, [tuple(v) for v in vecs]))
    return out


def _rotation_matrix(rows) -> Rotation3:
    return Rotation3(rows, check=False)


def _reduce_with(qc: QuadCoeffs, mat) -> QuadCoeffs:
    return to_quad_normal_form(rotate(quad_field(qc), _rotation_matrix(mat)))


def _unit_cols(c0, c1):
    n = _sqrt(normalize(c0 * c0 + c1 * c1))
    return normalize(scalars.div(c0, n)), normalize(scalars.div(c1, n))


def portrait_classify(X: HomVectorField) -> PortraitClass:
    """Topological phase-portrait class of a degree-2 tangent field,
    modulo limit cycles for the nondegenerate family."""
    qc = to_quad_normal_form(X)
    if X.is_zero():
        return PortraitClass("Fig3_LinearlyZero",
                             notes=["zero field: every point is singular"])
    A = sympy.Matrix([[scalars.to_sympy(v) for v in row]
                      for row in build_A(qc)])
    eig = _real_eigendata(A)
    plane_pairs = [(lam, vecs) for lam, vecs in eig if len(vecs) >= 2]
    if plane_pairs:
        return _classify_infinite(eig, plane_pairs)
    points = []
    for lam, vecs in eig:
        p = _exact_unit_sympy(vecs[0])
        points.append(p)
        points.append(tuple(normalize(-v) for v in p))
    return _classify_finite(X, qc, points)


def _classify_infinite(eig, plane_pairs) -> PortraitClass:
    lam_p, vecs = plane_pairs[0]
    if len(vecs) >= 3:
        return PortraitClass("Fig3_LinearlyZero",
                             notes=["zero field: every point is singular"])
    v1 = sympy.Matrix(vecs[0])
    v2 = sympy.Matrix(vecs[1])
    n = v1.cross(v2)
    extra = [(lam, vs) for lam, vs in eig
             if not (lam - lam_p).is_zero or len(vs) < 2]
    extra = [(lam, vs) for lam, vs in extra if len(vs) == 1]
    if not extra:
        return PortraitClass("Fig3_LinearlyZero",
                             notes=["circle of singularities through the "
                                    "degenerate axis"])
    w = sympy.Matrix(extra[0][1][0])
    cross = w.cross(n)
    if all(is_zero(normalize(c)) for c in cross):
        return PortraitClass("Fig2b_SingularCircle",
                             notes=["isolated pair on the circle's axis; "
                                    "all other orbits are periodic"])
    return PortraitClass("Fig2a_SingularCircle",
                         notes=["isolated pair off the circle's axis"])


def _south_qc(X: HomVectorField, p) -> QuadCoeffs:
    M = rotation_to_south_pole(p)
    return to_quad_normal_form(rotate(X, M))


def _classify_finite(X, qc, points) -> PortraitClass:
    from .local import center_test

    # one exact local pass over the singular points
    kinds = []
    for p in points:
        B = _exact_linear(X, p)
        tr = normalize(B[0][0] + B[1][1])
        de = normalize(B[0][0] * B[1][1] - B[0][1] * B[1][0])
        sd, st = sign_of(de), sign_of(tr)
        if sd < 0:
            kinds.append(("saddle", p))
        elif sd > 0 and st != 0:
            kinds.append(("node-or-focus", p))
        elif sd > 0:
            kinds.append(("center-or-weak-focus", p))
        elif st != 0:
            kinds.append(("semi-hyperbolic", p))
        elif any(not is_zero(normalize(B[i][j]))
                 for i in range(2) for j in range(2)):
            kinds.append(("nilpotent", p))
        else:
            kinds.append(("linearly-zero", p))

    by_kind = {}
    for k, p in kinds:
        by_kind.setdefault(k, []).append(p)

    if "linearly-zero" in by_kind:
        return PortraitClass("Fig3_LinearlyZero")
    if "nilpotent" in by_kind:
        return _classify_nilpotent(_south_qc(X, by_kind["nilpotent"][0]))
    if "center-or-weak-focus" in by_kind:
        for p in by_kind["center-or-weak-focus"]:
            sqc = _south_qc(X, p)
            verdict = center_test(sqc)
            if verdict.kind == "Center":
                return _classify_center(sqc)
        # only weak foci: nondegenerate modulo limit cycles
    if "semi-hyperbolic" in by_kind:
        return _classify_semihyperbolic(
            _south_qc(X, by_kind["semi-hyperbolic"][0]))
    subtype = "saddle+4" if len(points) == 6 else "2-singularities"
    notes = []
    if len(points) not in (2, 6):
        subtype = f"{len(points)}-singularities"
        notes.append("unexpected nondegenerate singularity count")
    return PortraitClass("Fig41_Nondegenerate", subtype,
                         modulo_limit_cycles=True, notes=notes)


def _exact_linear(X: HomVectorField, p):
    from .singular import linearize_at

    return linearize_at(X, p, exact=True)


def _classify_nilpotent(sqc: QuadCoeffs) -> PortraitClass:
    a1, a2, a3, a4, a5, a6, a7, a8 = sqc
    if not is_zero(a4):
        c0, c1 = _unit_cols(a4, a7)
        mat = ((c0, normalize(-c1), 0), (c1, c0, 0), (0, 0, 1))
        red = _reduce_with(sqc, mat)
    elif not is_zero(a7):
        red = _reduce_with(sqc, _SWAP_XY)
    else:
        red = sqc
    r1, r2 = tuple(red)[0], tuple(red)[1]
    if is_zero(r1):                      # would be a circle of singularities
        return PortraitClass("Fig2a_SingularCircle",
                             notes=["degenerate nilpotent reduction"])
    if is_zero(r2):
        return PortraitClass("Fig32_NilpotentCuspA2Zero")
    return PortraitClass("Fig31_NilpotentCusp")


def _classify_center(sqc: QuadCoeffs) -> PortraitClass:
    a1, a2 = sqc.a1, sqc.a2
    if not is_zero(a1):
        if is_zero(a2):
            red = _reduce_with(sqc, _SWAP_XY)
        else:
            c0, c1 = _unit_cols(normalize(-a2), a1)
            mat = ((c0, c1, 0), (c1, normalize(-c0), 0), (0, 0, 1))
            red = _reduce_with(sqc, mat)
    else:
        red = sqc
    r2, r5, r7 = red.a2, red.a5, red.a7
    if is_zero(r2):
        return PortraitClass("Fig35_TripleCenterPair")
    t7 = normalize(r7 * r7 + r5 * r7)
    if sign_of(t7) < 0:
        return PortraitClass("Fig33a")
    disc = normalize(r2 * r2 - 4 * t7)
    if sign_of(disc) >= 0:
        return PortraitClass("Fig33b")
    return PortraitClass("Fig33c_CenterFoci")


def _classify_semihyperbolic(sqc: QuadCoeffs) -> PortraitClass:
    a4, a5, a7 = sqc.a4, sqc.a5, sqc.a7
    if not is_zero(a4):
        c0, c1 = _unit_cols(normalize(-a7), a4)
        mat = ((c0, c1, 0), (c1, normalize(-c0), 0), (0, 0, 1))
        red = _reduce_with(sqc, mat)
    elif not is_zero(a5) and is_zero(a7):
        c0, c1 = _unit_cols(normalize(-sqc.a8), a5)
        mat = ((c0, c1, 0), (c1, normalize(-c0), 0), (0, 0, 1))
        red = _reduce_with(sqc, mat)
    else:
        red = sqc
    r1, r7 = red.a1, red.a7
    if not is_zero(r1) and not is_zero(r7):
        return PortraitClass("Fig36_SaddleNodes")
    if is_zero(r7):
        return PortraitClass("Fig37_TwoSingularities")
    return PortraitClass("Fig38_SaddleNodesFoci")


# ---------------------------------------------------------------------------
# Rotated families and inverse integrating factors
# ---------------------------------------------------------------------------

@dataclass
class RotationCheck:
    rotated: bool
    sign: int | None = None              # +1 factor PSD, -1 factor NSD
    factor: Poly | None = None
    factor_sign: SignStatus | None = None
    degenerate: bool = False
    notes: list = field(default_factory=list)

    def to_json_obj(self) -> dict:
        return {"rotated": self.rotated, "sign": self.sign,
                "factor": None if self.factor is None else repr(self.factor),
                "factor_sign": None if self.factor_sign is None
                else self.factor_sign.to_json_obj(),
                "degenerate": self.degenerate, "notes": list(self.notes)}


def rotated_family_check(builder, param_name: str = "mu") -> RotationCheck:
    """Decide whether `builder(param)` is a rotated family of planar systems.

    Computes the 2x2 determinant between two symbolic parameter values,
    factors out their difference, and reports the residual factor with its
    sign status.  The family is rotated when the factor is semidefinite."""
    m1 = sympy.Symbol(f"{param_name}_1", real=True)
    m2 = sympy.Symbol(f"{param_name}_2", real=True)
    s1, s2 = builder(m1), builder(m2)
    det = s1.pu * s2.pv - s2.pu * s1.pv
    if det.is_zero():
        return RotationCheck(False, degenerate=True,
                             notes=["determinant identically zero: the "
                                    "family does not move"])
    factor = det.map_coeffs(
        lambda c: normalize(sympy.cancel(sympy.expand(scalars.to_sympy(c))
                                         / (m2 - m1))))
    back = factor.map_coeffs(lambda c: normalize(
        sympy.expand(scalars.to_sympy(c) * (m2 - m1))))
    if not (back - det).is_zero():
        return RotationCheck(False, notes=["determinant is not a multiple of "
                                           "the parameter difference"])
    leftover = set()
    for c in factor.terms.values():
        if isinstance(c, sympy.Expr):
            leftover |= c.free_symbols
    if leftover & {m1, m2}:
        return RotationCheck(False, factor=factor,
                             notes=["factor still depends on the parameter"])
    st = sign_definiteness(factor)
    if st.semidefinite:
        return RotationCheck(True, 1 if st.status == "PSD" else -1, factor, st)
    return RotationCheck(False, factor=factor, factor_sign=st,
                         notes=["factor is not semidefinite"])


def inverse_integrating_factor_check(sys: PlanarSystem, V: Poly) -> bool:
    """Exact check of the inverse-integrating-factor identity
    P dV/du + Q dV/dv = div(P, Q) * V."""
    div_pq = sys.pu.partial(0) + sys.pv.partial(1)
    resid = sys.pu * V.partial(0) + sys.pv * V.partial(1) - div_pq * V
    return resid.is_zero()
