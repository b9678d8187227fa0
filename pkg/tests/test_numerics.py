import math
from fractions import Fraction

import pytest

from conftest import qc, rand_qc
from sphereflow.charts import ChartSpec, central_project
from sphereflow.families import (center_pair_field, hopf_example_chart,
                                 hopf_example_field)
from sphereflow.numerics import (BracketInvalid, PreconditionViolated,
                                 closure_distance, find_limit_cycle,
                                 hopf_scan, integrate_planar,
                                 integrate_sphere, poincare_return)
from sphereflow.spherefield import QuadCoeffs, quad_field


def test_sphere_drift_bound(rng):
    # integration with renormalization keeps | |x|^2 - 1 | tiny over T = 50
    for _ in range(20):
        X = quad_field(rand_qc(rng))
        traj = integrate_sphere(X, (0.6, 0.0, -0.8), (0.0, 50.0), tol=1e-10)
        assert traj.max_sphere_drift() <= 1e-9


def test_integrate_requires_unit_start():
    X = center_pair_field(1, -2)
    with pytest.raises(ValueError):
        integrate_sphere(X, (1.0, 1.0, 1.0), (0.0, 1.0))


def test_csv_dump_format():
    X = center_pair_field(1, -2)
    traj = integrate_sphere(X, (0.0, 0.0, 1.0), (0.0, 0.5))
    lines = traj.to_csv_str().strip().splitlines()
    assert lines[0] == "t,x,y,z"
    assert all(len(line.split(",")) == 4 for line in lines[1:])


def test_center_orbit_closes():
    X = center_pair_field(1, -2)
    x0 = (0.1, 0.1, math.sqrt(1 - 0.02))
    dist, period = closure_distance(X, x0)
    assert dist < 1e-8 and period > 0


def test_closure_at_equilibrium():
    X = center_pair_field(1, -2)
    assert closure_distance(X, (0.0, 0.0, 1.0)) == (0.0, 0.0)


def test_return_map_determinism():
    sys = hopf_example_chart(Fraction(9, 5))
    args = ((1.0, 0.0), (1.0, 0.0), (2.5, 0.0))
    (pa, ta) = poincare_return(sys, *args)
    (pb, tb) = poincare_return(sys, *args)
    assert ta == tb and tuple(pa) == tuple(pb)   # bitwise-identical floats


def test_find_limit_cycle_and_bracket_guard():
    sys = hopf_example_chart(Fraction(9, 5))
    cyc = find_limit_cycle(sys, (1.0, 0.0), (1.0, 0.0), (1.5, 2.0),
                           tol=1e-10)
    assert cyc is not None
    assert cyc.residual < 1e-8 and cyc.stability == "stable"
    with pytest.raises(BracketInvalid):
        find_limit_cycle(sys, (1.0, 0.0), (1.0, 0.0), (1.8, 1.9), tol=1e-8)


def test_hopf_scan_preconditions():
    with pytest.raises(PreconditionViolated):
        hopf_scan(lambda p: qc(a2=1, a5=1, a7=1, a8=p), 0.0, 1.0, 2)
    with pytest.raises(PreconditionViolated):
        hopf_scan(lambda p: qc(a1=1, a4=1, a5=1, a7=1, a8=p), 0.0, 1.0, 2)


def test_hopf_transversality_matches_closed_form(rng):
    # numerically differentiated Re(lambda) at the crossing vs -1/(2 a1)
    checked = 0
    while checked < 10:
        a1 = rand_qc(rng).a1
        a2, a5 = rand_qc(rng).a2, abs(rand_qc(rng).a5) + 1
        a7 = abs(rand_qc(rng).a7) + 1
        if a1 == 0:
            continue
        a8_star = a2 * a7 / a1          # mu = a1*a8 - a2*a7 = 0 here
        delta = 1e-6

        def builder(p, a1=a1, a2=a2, a5=a5, a7=a7):
            return QuadCoeffs(a1, a2, 0, 0, a5, 0, a7,
                              Fraction(p).limit_denominator(10 ** 15))

        reps = hopf_scan(builder, float(a8_star) - delta,
                         float(a8_star) + delta, 2, detect_cycles=False)
        dmu = float(a1) * 2 * delta     # d(mu)/d(a8) = a1
        deriv = (reps[1].re_lambda - reps[0].re_lambda) / dmu
        assert abs(deriv - (-1.0 / (2 * float(a1)))) < 1e-6
        assert abs(reps[0].transversality_raw
                   - (-1.0 / (2 * float(a1)))) < 1e-12
        checked += 1


def test_hopf_scan_reports_cycles_and_escape():
    def builder(p):
        return QuadCoeffs(-1, -2, 0, 0, 1, 0, 1,
                          Fraction(p).limit_denominator(10 ** 12))

    reps = hopf_scan(builder, 1.6, 1.8, 5)
    has_cycle = [r.cycle is not None for r in reps]
    assert not has_cycle[0] and has_cycle[-1]


def test_projection_consistency_of_trajectories():
    # a spherical trajectory mapped through a chart coincides, as a curve,
    # with the chart-integrated trajectory: sup distance < 1e-6
    import numpy as np

    from sphereflow.charts import project_point

    X = center_pair_field(1, -2)
    chart = ChartSpec("central", (0, 0, -1), "c")
    sys = central_project(X, chart)
    x0 = (0.15, 0.1, -math.sqrt(1 - 0.0325))
    straj = integrate_sphere(X, x0, (0.0, 6.0), tol=1e-12)
    proj = np.array([project_point(chart, p) for p in straj.points])
    ptraj = integrate_planar(sys, tuple(proj[0]), (0.0, 40.0), tol=1e-12)
    ts, ys = np.asarray(ptraj.times), np.asarray(ptraj.points)

    def f(y):
        return np.array(sys.eval_float(y))

    dense = [ys[0]]
    subs = np.linspace(0.0, 1.0, 20, endpoint=False)[1:]
    for i in range(len(ts) - 1):
        h = ts[i + 1] - ts[i]
        y0, y1 = ys[i], ys[i + 1]
        d0, d1 = f(y0) * h, f(y1) * h
        for s in subs:
            h00 = 2 * s ** 3 - 3 * s ** 2 + 1
            h10 = s ** 3 - 2 * s ** 2 + s
            h01 = -2 * s ** 3 + 3 * s ** 2
            h11 = s ** 3 - s ** 2
            dense.append(h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1)
        dense.append(y1)
    dense = np.array(dense)
    A, B = dense[:-1], dense[1:]
    AB = B - A
    L2 = (AB * AB).sum(1)
    L2[L2 == 0] = 1e-300
    sup = 0.0
    for p in proj:
        t = np.clip(((p - A) * AB).sum(1) / L2, 0.0, 1.0)
        d2 = ((A + t[:, None] * AB - p) ** 2).sum(1).min()
        sup = max(sup, math.sqrt(d2))
    assert sup < 1e-6


def test_planar_integration_consistency():
    # planar trajectory of a chart stays near the projected sphere orbit
    X = hopf_example_field(Fraction(9, 5))
    chart = ChartSpec("central", (0, 0, -1), "c")
    sys = central_project(X, chart)
    traj = integrate_planar(sys, (2.0, 0.5), (0.0, 1.0), tol=1e-12)
    assert traj.points.shape[1] == 2
    assert lines_finite(traj.points)


def lines_finite(points):
    return bool((abs(points) < 1e6).all())
