"""Fine local analysis at a singular point of a degree-2 tangent field.

Everything here works on the chart system at the south pole (0, 0, -1),
which for the 8-parameter field with a3 = a6 = 0 reads

    du/dt = -a4 u - a5 v + a1 uv + a2 v^2 - a4 u^3 - (a5+a7) u^2 v - a8 u v^2
    dv/dt = -a7 u - a8 v - a1 u^2 - a2 uv - a4 u^2 v - (a5+a7) u v^2 - a8 v^3

Provided tools: the exact center criterion, the closed-form first Lyapunov
coefficient, a homological-equation cascade computing V_1..V_k, and power
series classification of nilpotent and semi-hyperbolic singularities.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import sympy

from . import scalars
from .scalars import normalize, is_zero, sign_of, exact_sqrt, solve_linear_system
from .polyalg import Poly
from .spherefield import QuadCoeffs, quad_field
from .charts import ChartSpec, PlanarSystem, central_project


class PreconditionViolated(ValueError):
    pass


class NonRotationLinearPart(ValueError):
    pass


class NotNilpotent(ValueError):
    pass


class NotSemiHyperbolic(ValueError):
    pass


class TruncationInconclusive(RuntimeError):
    """The deciding series vanished identically through the truncation order."""


DEFAULT_SERIES_ORDER = 10


# ---------------------------------------------------------------------------
# chart system at the south pole
# ---------------------------------------------------------------------------

def south_pole_system(qc: QuadCoeffs) -> PlanarSystem:
    """Chart system at (0,0,-1); requires a3 = a6 = 0 so the pole is singular."""
    if not (is_zero(qc.a3) and is_zero(qc.a6)):
        raise PreconditionViolated("(0,0,-1) is singular only when a3 = a6 = 0")
    chart = ChartSpec("central", (0, 0, -1))
    return central_project(quad_field(qc), chart)


# ---------------------------------------------------------------------------
# center criterion and closed-form V1
# ---------------------------------------------------------------------------

@dataclass
class CenterVerdict:
    kind: str            # "Center" | "WeakFocus" | "NotApplicable"
    detail: str          # linear type, stability, or reason
    V1: object = None    # exact first Lyapunov coefficient when defined

    def to_json_obj(self) -> dict:
        return {"kind": self.kind, "detail": self.detail,
                "V1": None if self.V1 is None else float(scalars.to_float(self.V1)),
                "V1_exact": None if self.V1 is None else str(self.V1)}


def focus_expression(qc: QuadCoeffs):
    """The quantity whose sign decides stability of the weak focus."""
    return normalize(qc.a4 * (qc.a1 ** 2 - qc.a2 ** 2)
                     + qc.a1 * qc.a2 * (qc.a5 + qc.a7))


def center_test(qc: QuadCoeffs) -> CenterVerdict:
    """Exact center / weak-focus decision at (0,0,-1) (requires a3 = a6 = 0)."""
    if not (is_zero(qc.a3) and is_zero(qc.a6)):
        raise PreconditionViolated("(0,0,-1) is singular only when a3 = a6 = 0")
    trace = normalize(-(qc.a4 + qc.a8))
    det = normalize(qc.a4 * qc.a8 - qc.a5 * qc.a7)
    if not is_zero(trace):
        return CenterVerdict("NotApplicable", "trace != 0")
    if sign_of(det) <= 0:
        return CenterVerdict("NotApplicable", "det <= 0")
    # here a8 = -a4 and a4^2 + a5 a7 < 0
    expr = focus_expression(qc)
    v1 = lyapunov_v1_closed_form(qc)
    if is_zero(expr):
        lin = "rotation" if is_zero(qc.a4) and is_zero(normalize(qc.a5 + qc.a7)) \
            else "linear-type"
        return CenterVerdict("Center", lin, v1)
    stable = sign_of(expr) < 0
    return CenterVerdict("WeakFocus", "stable" if stable else "unstable", v1)


def lyapunov_v1_closed_form(qc: QuadCoeffs):
    """First Lyapunov coefficient of the weak focus at (0,0,-1), exactly."""
    if not is_zero(normalize(qc.a8 + qc.a4)):
        raise PreconditionViolated("needs a8 = -a4")
    disc = normalize(-(qc.a4 ** 2) - qc.a5 * qc.a7)
    if sign_of(disc) <= 0:
        raise PreconditionViolated("needs a4^2 + a5*a7 < 0")
    num = normalize((qc.a5 - qc.a7) * focus_expression(qc))
    power = exact_sqrt(normalize(disc ** 3))
    den = normalize(8 * qc.a7 * power)
    return scalars.div(num, den)


# ---------------------------------------------------------------------------
# homological cascade for Lyapunov coefficients
# ---------------------------------------------------------------------------

@dataclass
class LyapunovSolve:
    V: list                         # V_1 .. V_k (exact scalars)
    H: dict                         # degree j -> Poly in (r, s)
    first_nonzero: int | None       # index i of first V_i != 0, or None

    def to_json_obj(self) -> dict:
        return {
            "V": [float(scalars.to_float(v)) for v in self.V],
            "V_exact": [str(v) for v in self.V],
            "first_nonzero": self.first_nonzero,
            "H": {str(j): [[list(e), str(c)] for e, c in sorted(p.terms.items())]
                  for j, p in self.H.items()},
        }


def rotation_form(qc: QuadCoeffs) -> PlanarSystem:
    """Linear change r = (a4 v - a7 u)/w, s = v with w = sqrt(-(a4^2+a5 a7))
    and time scaled by w, putting the chart system in the form
    dr = -s + ..., ds = r + ... (exact over the extension by w)."""
    if not is_zero(normalize(qc.a8 + qc.a4)):
        raise PreconditionViolated("needs a8 = -a4")
    disc = normalize(-(qc.a4 ** 2) - qc.a5 * qc.a7)
    if sign_of(disc) <= 0:
        raise PreconditionViolated("needs a4^2 + a5*a7 < 0")
    w = exact_sqrt(disc)
    sys0 = south_pole_system(qc)
    r = Poly.variable(2, 0)
    s = Poly.variable(2, 1)
    # u = -w r / a7 + a4 s / a7, v = s
    u_img = r.map_coeffs(lambda c: scalars.div(c * (-w), qc.a7)) \
        + s.map_coeffs(lambda c: scalars.div(c * qc.a4, qc.a7))
    v_img = s
    pu_new = sys0.pu.substitute([u_img, v_img])
    pv_new = sys0.pv.substitute([u_img, v_img])
    # dr/dtau = (a4 dv - a7 du) / (w * w), ds/dtau = dv / w
    dr = (pv_new.map_coeffs(lambda c: normalize(c * qc.a4))
          - pu_new.map_coeffs(lambda c: normalize(c * qc.a7)))
    dr = dr.map_coeffs(lambda c: scalars.div(c, normalize(w * w)))
    ds = pv_new.map_coeffs(lambda c: scalars.div(c, w))
    return PlanarSystem(dr, ds, None, "time scaled by sqrt(-(a4^2+a5*a7))")


def _check_rotation(sys: PlanarSystem) -> None:
    lp = sys.linear_part()
    if not (is_zero(lp[0][0]) and is_zero(lp[1][1])
            and is_zero(normalize(lp[0][1] + 1))
            and is_zero(normalize(lp[1][0] - 1))):
        raise NonRotationLinearPart(f"linear part {lp} is not (-s, r)")


def lyapunov_homological(sys: PlanarSystem, k: int,
                         gauge=0) -> LyapunovSolve:
    """Solve the cascade of homological equations for H = (r^2+s^2)/2 + ...
    with dH/dt = sum_i V_i (r^2+s^2)^(i+1); returns V_1..V_k.

    `gauge` fixes the free rotational mode of each even-degree H_j (the
    coefficient added along (r^2+s^2)^(j/2)); the V_i do not depend on it.
    """
    _check_rotation(sys)
    H = {2: Poly(2, {(2, 0): _half(), (0, 2): _half()})}
    V = []
    top = 2 * k + 2
    # nonlinear parts of the field
    f_nl = sys.pu - Poly(2, {(0, 1): -1})
    g_nl = sys.pv - Poly(2, {(1, 0): 1})
    for j in range(3, top + 1):
        # G_j = degree-j part of sum_{i<j} (dH_i/dr * f_nl + dH_i/ds * g_nl)
        G = Poly.zero(2)
        for i, Hi in H.items():
            G = G + Hi.partial(0) * f_nl + Hi.partial(1) * g_nl
        G = G.homogeneous_part(j)
        mons = [(a, j - a) for a in range(j, -1, -1)]
        idx = {m: t for t, m in enumerate(mons)}
        ncols = len(mons) + (1 if j % 2 == 0 else 0)
        rows = [[0] * ncols for _ in mons]
        # L(r^a s^b) = -a r^(a-1) s^(b+1) + b r^(a+1) s^(b-1)
        for t, (a, b) in enumerate(mons):
            if a > 0:
                rows[idx[(a - 1, b + 1)]][t] += -a
            if b > 0:
                rows[idx[(a + 1, b - 1)]][t] += b
        # degree-j part of dH/dt: L(H_j) + G_j = V (r^2+s^2)^(j/2) (even j)
        if j % 2 == 0:
            circ = Poly(2, {(2, 0): 1, (0, 2): 1}) ** (j // 2)
            for m, c in circ.terms.items():
                rows[idx[m]][len(mons)] = normalize(-c)
        rhs = [normalize(-G.coeff(m)) for m in mons]
        sol = solve_linear_system(rows, rhs)
        if sol is None:
            raise RuntimeError(f"homological equation at degree {j} inconsistent")
        Hj = Poly(2, {m: sol[t] for t, m in enumerate(mons)})
        if j % 2 == 0:
            V.append(normalize(sol[len(mons)]))
            if not is_zero(gauge):
                circ = Poly(2, {(2, 0): 1, (0, 2): 1}) ** (j // 2)
                Hj = Hj + circ.map_coeffs(lambda c: normalize(c * gauge))
        H[j] = Hj
    return LyapunovSolve(V, H, next(
        (i + 1 for i, v in enumerate(V) if not is_zero(v)), None))


def _half():
    from fractions import Fraction
    return Fraction(1, 2)


def lyapunov_from_coeffs(qc: QuadCoeffs, k: int, gauge=0) -> LyapunovSolve:
    """Convenience: rotation form + homological cascade."""
    return lyapunov_homological(rotation_form(qc), k, gauge)


# ---------------------------------------------------------------------------
# power-series classification
# ---------------------------------------------------------------------------

@dataclass
class SeriesClassification:
    verdict: str                     # SaddleNode | Cusp | TopologicalNode | NonIsolated
    phi: list = field(default_factory=list)   # coefficients phi_m, m = 0..N
    psi: list = field(default_factory=list)   # coefficients psi_m, m = 0..N
    leading_index: int | None = None
    leading_coeff: object = None
    alpha2: object = None            # quadratic data for nilpotent points
    beta2: object = None
    order: int = DEFAULT_SERIES_ORDER

    def to_json_obj(self) -> dict:
        return {
            "verdict": self.verdict,
            "phi": [str(c) for c in self.phi],
            "psi": [str(c) for c in self.psi],
            "leading_index": self.leading_index,
            "leading_coeff": None if self.leading_coeff is None
            else str(self.leading_coeff),
            "alpha2": None if self.alpha2 is None else str(self.alpha2),
            "beta2": None if self.beta2 is None else str(self.beta2),
            "order": self.order,
        }


def _poly1_from_coeffs(coeffs) -> Poly:
    return Poly(1, {(m,): c for m, c in enumerate(coeffs)})


def _truncate1(p: Poly, N: int) -> Poly:
    return Poly(1, {e: c for e, c in p.terms.items() if e[0] <= N})


def _compose_with_phi(p2: Poly, phi_coeffs, N: int) -> Poly:
    """p2(r, phi(r)) truncated at degree N (1-variable result)."""
    r = Poly(1, {(1,): 1})
    phi = _poly1_from_coeffs(phi_coeffs)
    out = _truncate1(p2.substitute([r, phi]), N)
    return out


def solve_manifold_series(f: Poly, g: Poly, N: int) -> list:
    """Invariant-manifold series s = phi(r) = c_2 r^2 + ... + c_N r^N for
    dr = f(r,s), ds = g(r,s) with g = s + (higher order): solve
    phi' * f(r,phi) = g(r,phi) order by order."""
    phi = [0] * (N + 1)
    for m in range(2, N + 1):
        phi_p = _poly1_from_coeffs(
            [(i + 1) * phi[i + 1] for i in range(N)] + [0])
        lhs = _truncate1(phi_p * _compose_with_phi(f, phi, N), N)
        rhs = _compose_with_phi(g, phi, N)
        resid = lhs - rhs
        # with phi known below degree m, the r^m coefficient of
        # phi' f - (phi + Q2) is exactly the unknown c_m
        phi[m] = normalize(resid.coeff((m,)))
    return phi


def solve_algebraic_series(h: Poly, N: int) -> list:
    """Series solution s = phi(r) of s + h(r,s) = 0 with h of order >= 2,
    by fixed-point iteration phi <- -h(r, phi)."""
    phi = [0] * (N + 1)
    for _ in range(N):
        img = _compose_with_phi(h, phi, N)
        new = [normalize(-img.coeff((m,))) for m in range(N + 1)]
        if new == phi:
            break
        phi = new
    return phi


def _leading(coeffs):
    for m, c in enumerate(coeffs):
        if not is_zero(c):
            return m, c
    return None, None


def semi_hyperbolic_classify(sys: PlanarSystem,
                             N: int = DEFAULT_SERIES_ORDER) -> SeriesClassification:
    """Classify the origin of a planar system with one zero and one nonzero
    eigenvalue by its center-manifold series.

    The linear change uses the kernel vector and the nonzero-eigenvalue
    eigenvector, each scaled so its last nonzero entry is 1, and time is
    divided by the nonzero eigenvalue; this reproduces the classical
    reductions for the chart systems treated here.
    """
    lp = sys.linear_part()
    tr = normalize(lp[0][0] + lp[1][1])
    det = normalize(lp[0][0] * lp[1][1] - lp[0][1] * lp[1][0])
    if not is_zero(det) or is_zero(tr):
        raise NotSemiHyperbolic(f"trace {tr}, det {det}")
    tau = tr                      # the nonzero eigenvalue
    kvec = _null_vector(lp)
    wvec = _null_vector([[normalize(lp[0][0] - tau), lp[0][1]],
                         [lp[1][0], normalize(lp[1][1] - tau)]])
    kvec = _scale_last_one(kvec)
    wvec = _scale_last_one(wvec)
    T = [[kvec[0], wvec[0]], [kvec[1], wvec[1]]]
    dT = normalize(T[0][0] * T[1][1] - T[0][1] * T[1][0])
    if is_zero(dT):
        raise NotSemiHyperbolic("defective linear part")
    Ti = [[scalars.div(T[1][1], dT), scalars.div(-T[0][1], dT)],
          [scalars.div(-T[1][0], dT), scalars.div(T[0][0], dT)]]
    r = Poly.variable(2, 0)
    s = Poly.variable(2, 1)
    u_img = r.map_coeffs(lambda c: normalize(c * T[0][0])) + \
        s.map_coeffs(lambda c: normalize(c * T[0][1]))
    v_img = r.map_coeffs(lambda c: normalize(c * T[1][0])) + \
        s.map_coeffs(lambda c: normalize(c * T[1][1]))
    pu = sys.pu.substitute([u_img, v_img])
    pv = sys.pv.substitute([u_img, v_img])
    f = (pu.map_coeffs(lambda c: normalize(c * Ti[0][0]))
         + pv.map_coeffs(lambda c: normalize(c * Ti[0][1])))
    g = (pu.map_coeffs(lambda c: normalize(c * Ti[1][0]))
         + pv.map_coeffs(lambda c: normalize(c * Ti[1][1])))
    f = f.map_coeffs(lambda c: scalars.div(c, tau))
    g = g.map_coeffs(lambda c: scalars.div(c, tau))
    phi = solve_manifold_series(f, g, N)
    psi_poly = _compose_with_phi(f, phi, N)
    psi = [normalize(psi_poly.coeff((m,))) for m in range(N + 1)]
    m, c = _leading(psi)
    if m is None:
        if _line_of_singularities(f, g):
            return SeriesClassification("NonIsolated", phi, psi, None, None,
                                        order=N)
        raise TruncationInconclusive(f"psi = 0 through order {N}")
    if m % 2 == 0:
        verdict = "SaddleNode"
    elif sign_of(c) > 0:
        verdict = "TopologicalNode"
    else:
        verdict = "Saddle"
    return SeriesClassification(verdict, phi, psi, m, c, order=N)


def _line_of_singularities(f: Poly, g: Poly) -> bool:
    """True when s divides both components (the r-axis... the s=0 axis is a
    line of singular points)."""
    return all(e[1] >= 1 for e in f.terms) and all(e[1] >= 1 for e in g.terms)


def _null_vector(lp):
    a, b = lp[0]
    c, d = lp[1]
    if not (is_zero(a) and is_zero(b)):
        return (normalize(-b), a) if not is_zero(a) or not is_zero(b) else (1, 0)
    if not (is_zero(c) and is_zero(d)):
        return (normalize(-d), c)
    return (1, 0)


def _scale_last_one(vec):
    if not is_zero(vec[1]):
        return (scalars.div(vec[0], vec[1]), 1)
    if not is_zero(vec[0]):
        return (1, 0)
    raise NotSemiHyperbolic("zero eigenvector")


def nilpotent_classify(qc: QuadCoeffs,
                       N: int = DEFAULT_SERIES_ORDER) -> SeriesClassification:
    """Classify the nilpotent singularity at (0,0,-1): requires a3 = a6 = 0,
    a8 = -a4, a4^2 + a5 a7 = 0 and a nonzero linear part."""
    if not (is_zero(qc.a3) and is_zero(qc.a6)):
        raise PreconditionViolated("(0,0,-1) is singular only when a3 = a6 = 0")
    if not is_zero(normalize(qc.a8 + qc.a4)):
        raise NotNilpotent("needs a8 = -a4")
    if not is_zero(normalize(qc.a4 ** 2 + qc.a5 * qc.a7)):
        raise NotNilpotent("needs a4^2 + a5*a7 = 0")
    if all(is_zero(v) for v in (qc.a4, qc.a5, qc.a7, qc.a8)):
        raise NotNilpotent("linear part is zero")
    sys0 = south_pole_system(qc)
    alpha2 = beta2 = None
    if not is_zero(qc.a4):
        # then a5 a7 = -a4^2 != 0.  Take new coordinates along a Jordan pair
        # (k1, k2) with k1 = A k2, A the linear part; then dr = s + quadratic
        # terms exactly.  The particular k2 below is the normalization under
        # which alpha2 = (a1 a4 + a2 a7)/a7 and
        # beta2 = (a4^2 + a7^2)(a1 a4 + a2 a7)/(a4 a7).
        a4, a5, a7, a8 = qc.a4, qc.a5, qc.a7, qc.a8
        h = normalize(a4 ** 2 + a7 ** 2)
        alpha2 = scalars.div(qc.a1 * a4 + qc.a2 * a7, a7)
        beta2 = scalars.div(h * (a4 * qc.a1 + a7 * qc.a2), a4 * a7)
        k2 = (scalars.div(a7 ** 2 - a4 ** 2, a4 * h),
              scalars.div(-2 * a7, h))
        k1 = (normalize(-a4 * k2[0] - a5 * k2[1]),
              normalize(-a7 * k2[0] - a8 * k2[1]))
        T = [[k1[0], k2[0]], [k1[1], k2[1]]]
        dT = normalize(T[0][0] * T[1][1] - T[0][1] * T[1][0])
        Ti = [[scalars.div(T[1][1], dT), scalars.div(-T[0][1], dT)],
              [scalars.div(-T[1][0], dT), scalars.div(T[0][0], dT)]]
        r = Poly.variable(2, 0)
        s = Poly.variable(2, 1)
        u_img = r.map_coeffs(lambda c: normalize(c * T[0][0])) + \
            s.map_coeffs(lambda c: normalize(c * T[0][1]))
        v_img = r.map_coeffs(lambda c: normalize(c * T[1][0])) + \
            s.map_coeffs(lambda c: normalize(c * T[1][1]))
        pu = sys0.pu.substitute([u_img, v_img])
        pv = sys0.pv.substitute([u_img, v_img])
        f = (pu.map_coeffs(lambda c: normalize(c * Ti[0][0]))
             + pv.map_coeffs(lambda c: normalize(c * Ti[0][1])))
        g = (pu.map_coeffs(lambda c: normalize(c * Ti[1][0]))
             + pv.map_coeffs(lambda c: normalize(c * Ti[1][1])))
    elif not is_zero(qc.a5):
        # a4 = a8 = a7 = 0, a5 != 0: time scale by -a5 gives dr = s + ...
        f = sys0.pu.map_coeffs(lambda c: scalars.div(c, -qc.a5))
        g = sys0.pv.map_coeffs(lambda c: scalars.div(c, -qc.a5))
    else:
        # a4 = a8 = a5 = 0, a7 != 0: swap the variables, then scale by -a7
        swap = [Poly.variable(2, 1), Poly.variable(2, 0)]
        f = sys0.pv.substitute(swap).map_coeffs(
            lambda c: scalars.div(c, -qc.a7))
        g = sys0.pu.substitute(swap).map_coeffs(
            lambda c: scalars.div(c, -qc.a7))
    # canonical form dr = s + P2(r,s), ds = Q2(r,s):
    # phi solves s + P2(r,s) = 0, psi(r) = Q2(r, phi(r))
    P2 = f - Poly(2, {(0, 1): 1})
    phi = solve_algebraic_series(P2, N)
    psi_poly = _compose_with_phi(g, phi, N)
    psi = [normalize(psi_poly.coeff((m,))) for m in range(N + 1)]
    m, c = _leading(psi)
    if m is None:
        return SeriesClassification("NonIsolated", phi, psi, None, None,
                                    alpha2, beta2, N)
    if m % 2 == 0:
        return SeriesClassification("Cusp", phi, psi, m, c, alpha2, beta2, N)
    raise TruncationInconclusive(
        f"odd leading index {m} outside the treated nilpotent families")
