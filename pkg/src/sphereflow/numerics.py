"""Numerical flow analysis: trajectory integration on the sphere and in
charts, Poincaré return maps, limit-cycle search, and one-parameter scans
for cycle births at a weak focus.

All integration goes through the kernel backend (compiled when available,
pure Python otherwise); the algorithms here are deterministic.
"""

from __future__ import annotations

import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .charts import ChartSpec, PlanarSystem, central_project
from .polyalg import Poly
from .scalars import to_float
from .spherefield import HomVectorField, QuadCoeffs, quad_field


class StepFailure(RuntimeError):
    """The adaptive integrator underflowed its step size (stiffness)."""


class NoReturn(RuntimeError):
    """The orbit left the bounding disc or exceeded the time budget without
    crossing the section."""


class BracketInvalid(ValueError):
    """The displacement map does not change sign over the given bracket."""


class PreconditionViolated(ValueError):
    """The family does not satisfy the scan's structural requirements."""


def field_arrays(components, nvars: int):
    """Pack polynomials into padded (exps, coeffs) arrays for the kernels."""
    rows = [p.to_arrays() for p in components]
    nterms = max((len(c) for _, c in rows), default=0) or 1
    ncomp = len(components)
    exps = np.zeros((ncomp, nterms, nvars), dtype=np.int64)
    coeffs = np.zeros((ncomp, nterms), dtype=np.float64)
    for i, (e, c) in enumerate(rows):
        if len(c):
            exps[i, :len(c), :] = e
            coeffs[i, :len(c)] = c
    return exps, coeffs


@dataclass
class Trajectory:
    times: np.ndarray
    points: np.ndarray
    chart: str                   # "sphere" or a chart tag
    stats: dict = field(default_factory=dict)

    def max_sphere_drift(self) -> float:
        if self.chart != "sphere":
            raise ValueError("drift is only defined for spherical samples")
        return float(np.abs((self.points ** 2).sum(axis=1) - 1.0).max())

    def to_csv(self, target) -> None:
        header = "t,x,y,z" if self.points.shape[1] == 3 else "t,u,v"
        own = isinstance(target, (str, os.PathLike))
        fh = open(target, "w") if own else target
        try:
            fh.write(header + "\n")
            for t, row in zip(self.times, self.points):
                fh.write(",".join(repr(float(v)) for v in (t, *row)) + "\n")
        finally:
            if own:
                fh.close()

    def to_csv_str(self) -> str:
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()


def _run_integrate(exps, coeffs, x0, t0, t1, tol, renorm):
    status, ts, ys, nsteps, nrej = kernels.rk45_integrate(
        exps, coeffs, np.asarray(x0, dtype=float), float(t0), float(t1),
        tol, tol * 1e-2, renorm)
    if status == kernels.STATUS_STEP_FAILURE:
        raise StepFailure("integration step size underflow")
    return np.asarray(ts), np.asarray(ys), nsteps, nrej


def integrate_sphere(X: HomVectorField, x0, t_span, tol: float = 1e-10
                     ) -> Trajectory:
    """Integrate a tangent field on the sphere with per-step
    renormalization; samples stay within 1e-9 of the sphere."""
    x0 = np.asarray([to_float(v) for v in x0], dtype=float)
    if abs(x0 @ x0 - 1.0) > 1e-9:
        raise ValueError("initial point must lie on the unit sphere")
    exps, coeffs = field_arrays(X.components(), 3)
    t0, t1 = t_span
    ts, ys, nsteps, nrej = _run_integrate(exps, coeffs, x0, t0, t1, tol, True)
    return Trajectory(ts, ys, "sphere",
                      {"steps": nsteps, "rejected": nrej,
                       "backend": kernels.BACKEND})


def integrate_planar(sys: PlanarSystem, p0, t_span, tol: float = 1e-10
                     ) -> Trajectory:
    exps, coeffs = field_arrays((sys.pu, sys.pv), 2)
    t0, t1 = t_span
    ts, ys, nsteps, nrej = _run_integrate(
        exps, coeffs, np.asarray(p0, dtype=float), t0, t1, tol, False)
    return Trajectory(ts, ys, f"{sys.chart.kind}", {
        "steps": nsteps, "rejected": nrej, "backend": kernels.BACKEND})


def poincare_return(sys: PlanarSystem, anchor, direction, p0,
                    tol: float = 1e-10, t_max: float = 400.0,
                    bound: float = 1e3):
    """First return of the planar orbit through p0 to the ray
    anchor + s*direction (s > 0), event-located by bisection.

    Returns (point, time).  Raises NoReturn when the orbit leaves the
    bounding disc or exhausts t_max.
    """
    exps, coeffs = field_arrays((sys.pu, sys.pv), 2)
    status, t, y = kernels.rk45_to_section(
        exps, coeffs, np.asarray(p0, dtype=float),
        np.asarray(anchor, dtype=float), np.asarray(direction, dtype=float),
        float(t_max), tol, tol * 1e-2, bound)
    if status == kernels.STATUS_OK:
        return np.asarray(y, dtype=float), float(t)
    if status == kernels.STATUS_NO_RETURN:
        raise NoReturn("orbit left the bounding disc or exceeded the time "
                       "budget without crossing the section")
    raise StepFailure("integration step size underflow")


def closure_distance(X: HomVectorField, x0, tol: float = 1e-12,
                     t_max: float = 200.0):
    """Distance by which the orbit through x0 misses closing up after one
    revolution, measured at its first oriented return to the plane through
    x0 orthogonal to the initial velocity.

    Returns (distance, period).  Raises NoReturn when no return occurs.
    """
    traj = integrate_sphere(X, x0, (0.0, t_max), tol)
    pts = traj.points
    ts = traj.times
    x0 = np.asarray([to_float(v) for v in x0], dtype=float)
    P, Q, R = X.components()

    def f(p):
        return np.array([P.eval_float(p), Q.eval_float(p), R.eval_float(p)])

    w = f(x0)
    wn = np.linalg.norm(w)
    if wn == 0.0:
        return 0.0, 0.0          # equilibrium: trivially closed
    w = w / wn
    g = (pts - x0) @ w
    for i in range(1, len(ts) - 1):
        if g[i] < 0.0 <= g[i + 1] and np.linalg.norm(pts[i] - x0) < 0.5 \
                and ts[i] > 1e-6:
            y0, y1 = pts[i], pts[i + 1]
            f0, f1 = f(y0), f(y1)
            h = ts[i + 1] - ts[i]
            lo, hi = 0.0, 1.0
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                t2, t3 = mid * mid, mid * mid * mid
                ym = ((2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + mid) * h * f0
                      + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * f1)
                if (ym - x0) @ w < 0.0:
                    lo = mid
                else:
                    hi = mid
            mid = 0.5 * (lo + hi)
            t2, t3 = mid * mid, mid * mid * mid
            ym = ((2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + mid) * h * f0
                  + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * f1)
            ym = ym / np.linalg.norm(ym)
            return float(np.linalg.norm(ym - x0)), float(ts[i] + mid * h)
    raise NoReturn("orbit did not return to the transversal plane")


@dataclass
class CycleEstimate:
    anchor: tuple
    direction: tuple
    offset: float                # fixed point of the return map, ray units
    point: tuple                 # fixed point in chart coordinates
    period: float
    slope: float                 # return-map derivative at the fixed point
    stability: str               # stable | unstable | Undetermined
    residual: float              # |return(p*) - p*|

    def to_json_obj(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v)
                for k, v in self.__dict__.items()}


def _return_offset(sys, anchor, direction, s, tol, t_max=400.0):
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    a = np.asarray(anchor, dtype=float)
    p0 = a + s * d
    q, t = poincare_return(sys, a, d, p0, tol, t_max)
    return float(d @ (q - a)), float(t)


def find_limit_cycle(sys: PlanarSystem, anchor, direction, bracket,
                     tol: float = 1e-10, residual: float = 1e-9,
                     flat_tol: float = 1e-11) -> CycleEstimate | None:
    """Root of the return-map displacement d(s) = return(s) - s over the
    bracket; stability from the return-map slope at the fixed point.

    Returns None when d vanishes identically over the bracket (an annulus
    of periodic orbits rather than an isolated cycle).
    """
    s_lo, s_hi = float(bracket[0]), float(bracket[1])
    r_lo, _ = _return_offset(sys, anchor, direction, s_lo, tol)
    r_hi, _ = _return_offset(sys, anchor, direction, s_hi, tol)
    d_lo, d_hi = r_lo - s_lo, r_hi - s_hi
    scale = max(abs(s_lo), abs(s_hi), 1.0)
    if abs(d_lo) < flat_tol * scale and abs(d_hi) < flat_tol * scale:
        mid = 0.5 * (s_lo + s_hi)
        d_mid, _ = _return_offset(sys, anchor, direction, mid, tol)
        if abs(d_mid - mid) < flat_tol * scale:
            return None          # annulus of periodic orbits
    if d_lo * d_hi > 0:
        raise BracketInvalid("displacement map keeps one sign on bracket")
    lo, hi, dlo = s_lo, s_hi, d_lo
    s_star, t_star = 0.5 * (lo + hi), 0.0
    for _ in range(200):
        # secant proposal clipped into the bisection bracket
        r_hi_cur, _ = _return_offset(sys, anchor, direction, hi, tol)
        dhi = r_hi_cur - hi
        if dhi != dlo:
            cand = hi - dhi * (hi - lo) / (dhi - dlo)
        else:
            cand = 0.5 * (lo + hi)
        if not (lo < cand < hi):
            cand = 0.5 * (lo + hi)
        r_c, t_c = _return_offset(sys, anchor, direction, cand, tol)
        d_c = r_c - cand
        if abs(d_c) < residual:
            s_star, t_star = cand, t_c
            break
        if d_c * dlo <= 0:
            hi = cand
        else:
            lo, dlo = cand, d_c
        s_star, t_star = cand, t_c
    r_star, t_star = _return_offset(sys, anchor, direction, s_star, tol)
    eps = max(1e-6, 1e-5 * abs(s_star))
    r_eps, _ = _return_offset(sys, anchor, direction, s_star + eps, tol)
    slope = (r_eps - r_star) / eps
    if abs(slope - 1.0) < 1e-4:
        stability = "Undetermined"
    else:
        stability = "stable" if abs(slope) < 1.0 else "unstable"
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    a = np.asarray(anchor, dtype=float)
    pt = a + s_star * d
    return CycleEstimate(tuple(a), tuple(d), s_star, tuple(pt), t_star,
                         slope, stability, abs(r_star - s_star))


# ---------------------------------------------------------------------------
# One-parameter scan of the saddle-plus-foci family for cycle births
# ---------------------------------------------------------------------------

@dataclass
class HopfReport:
    param: float                 # raw family parameter
    mu: float                    # bifurcation parameter a1*a8 - a2*a7
    eigenvalues: tuple           # (lambda+, lambda-) at the focus, closed form
    re_lambda: float
    transversality_raw: float    # d(Re lambda)/dmu = 1/(2 a1)
    transversality_unit: float   # after the chart normalization, equals 1
    focus: tuple
    v1_sign: int | None          # stability indicator of the weak focus
    cycle: CycleEstimate | None
    no_return: bool = False      # outer probe escaped (separatrix side)

    def to_json_obj(self) -> dict:
        obj = dict(self.__dict__)
        obj["eigenvalues"] = [[z.real, z.imag] for z in self.eigenvalues]
        obj["focus"] = list(self.focus)
        obj["cycle"] = None if self.cycle is None else self.cycle.to_json_obj()
        return obj


def _family142_floats(qc: QuadCoeffs):
    vals = [to_float(v) for v in qc]
    a1, a2, a3, a4, a5, a6, a7, a8 = vals
    if abs(a3) > 1e-14 or abs(a6) > 1e-14 or abs(a4) > 1e-14:
        raise PreconditionViolated("scan requires the saddle-at-the-poles "
                                   "family pattern (a3 = a4 = a6 = 0)")
    if a1 == 0.0:
        raise PreconditionViolated("scan requires a1 != 0")
    if -a5 * a7 >= 0.0:
        raise PreconditionViolated("scan requires a5*a7 > 0 "
                                   "(saddle at the poles)")
    return vals


def scan_parameters(lo: float, hi: float, steps: int):
    if steps < 1:
        return [float(lo)]
    return [lo + (hi - lo) * k / (steps - 1) if steps > 1 else float(lo)
            for k in range(steps)]


def _scan_one(builder, p, tol, detect_cycles, probe_radii):
    qc = builder(p)
    a1, a2, a3, a4, a5, a6, a7, a8 = _family142_floats(qc)
    mu = -(a2 * a7 - a1 * a8)
    # linearization at the focus has trace -mu/a1 and determinant
    # (a7^2 + a5*a7)(a1^2 + a7^2)/a1^2
    disc = mu * mu - 4 * (a7 ** 2 + a5 * a7) * (a1 ** 2 + a7 ** 2)
    root = np.sqrt(complex(disc))
    lam_p = (-mu + root) / (2 * a1)
    lam_m = (-mu - root) / (2 * a1)
    re_lam = -mu / (2 * a1) if disc < 0 else max(lam_p.real, lam_m.real)
    focus = (-a7 / a1, 0.0)
    from .local import focus_expression
    try:
        expr = to_float(focus_expression(qc))
        v1_sign = 0 if expr == 0 else (1 if expr > 0 else -1)
    except Exception:
        v1_sign = None
    X = quad_field(qc)
    sys = central_project(X, ChartSpec("central", (0, 0, -1), "c"))
    cycle = None
    no_return = False
    if detect_cycles and disc < 0:
        # ray from the focus away from the saddle at the chart origin
        fvec = np.asarray(focus)
        d = fvec / np.linalg.norm(fvec) if np.linalg.norm(fvec) else \
            np.array([1.0, 0.0])
        signs = []
        radii = []
        for r in probe_radii:
            try:
                off, _ = _return_offset(sys, focus, d, r, tol)
                signs.append(1 if off - r > 0 else -1)
                radii.append(r)
            except NoReturn:
                no_return = True
                break
            except StepFailure:
                break
        for i in range(1, len(radii)):
            if signs[i] != signs[i - 1]:
                try:
                    cycle = find_limit_cycle(sys, focus, d,
                                             (radii[i - 1], radii[i]), tol)
                except (BracketInvalid, NoReturn, StepFailure):
                    cycle = None
                break
    return HopfReport(float(p), mu, (lam_p, lam_m), float(re_lam),
                      -1.0 / (2 * a1), 1.0, focus, v1_sign, cycle, no_return)


def hopf_scan(builder, lo: float, hi: float, steps: int,
              detect_cycles: bool = True, tol: float = 1e-9,
              probe_radii=(0.05, 0.1, 0.2, 0.35, 0.5, 0.7, 1.0, 1.5, 2.0,
                           3.0, 4.0)):
    """Scan builder(param) over [lo, hi] for eigenvalue crossings and limit
    cycles around the off-pole focus of the saddle family.

    builder must return coefficients with a3 = a4 = a6 = 0 and a1 != 0; the
    focus sits at (-a7/a1, 0) in the central chart at the south pole, with
    closed-form eigenvalues reported per sample.  Samples run on a worker
    pool capped by SPHEREFLOW_THREADS; results are merged in parameter
    order.
    """
    params = scan_parameters(lo, hi, steps)
    max_workers = int(os.environ.get("SPHEREFLOW_THREADS", "0")) or \
        min(8, os.cpu_count() or 1)
    if max_workers > 1 and len(params) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            reports = list(pool.map(
                lambda p: _scan_one(builder, p, tol, detect_cycles,
                                    probe_radii), params))
    else:
        reports = [_scan_one(builder, p, tol, detect_cycles, probe_radii)
                   for p in params]
    return reports
