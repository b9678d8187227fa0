import math
import random
from fractions import Fraction

from conftest import rand_qc
from sphereflow.charts import (ChartSpec, PlanarSystem, central_images,
                               central_project, chart_roundtrip_check,
                               project_point, stereo_images, stereo_project,
                               unproject_point)
from sphereflow.spherefield import quad_field


def sphere_samples(rng, n=40):
    pts = []
    while len(pts) < n:
        v = [rng.gauss(0, 1) for _ in range(3)]
        nrm = math.sqrt(sum(x * x for x in v))
        if nrm > 1e-6:
            pts.append(tuple(x / nrm for x in v))
    return pts


def test_chart_roundtrips(rng):
    pts = sphere_samples(rng)
    for kind in ("central", "stereo"):
        for base, branch in [((0, 0, -1), "c"), ((1, 0, 0), "a"),
                             ((0, -1, 0), "b"),
                             ((Fraction(3, 5), 0, Fraction(4, 5)), "a")]:
            chart = ChartSpec(kind, base, branch)
            assert chart_roundtrip_check(chart, pts) < 1e-12


def test_images_live_on_sphere_ray():
    # substitution images must parametrize sphere points up to a positive
    # scalar: x^2+y^2+z^2 composed with them is a square/positive polynomial
    chart = ChartSpec("central", (0, 0, -1), "c")
    imgs = central_images(chart)
    s = imgs[0] * imgs[0] + imgs[1] * imgs[1] + imgs[2] * imgs[2]
    assert s.eval((Fraction(1, 2), Fraction(-1, 3))) > 0
    chart = ChartSpec("stereo", (0, 0, 1), "c")
    imgs = stereo_images(chart)
    lam = Fraction(1) + Fraction(1, 4) + Fraction(1, 9)
    pt = tuple(p.eval((Fraction(1, 2), Fraction(1, 3))) for p in imgs)
    assert sum(v * v for v in pt) == (lam * lam)


def _pushforward_parallel(X, chart, project, images, uv):
    """Planar field at uv is a positive multiple of the pushforward of X."""
    sys = project(X, chart)
    w = unproject_point(chart, uv)
    # numeric pushforward: d/dt project(x(t)) at x = w via finite differences
    h = 1e-7
    xv = X.eval_float(w)
    nrm = math.sqrt(sum(v * v for v in w))
    wp = [w[i] + h * xv[i] for i in range(3)]
    n2 = math.sqrt(sum(v * v for v in wp))
    wp = [v / n2 for v in wp]
    try:
        u0 = project_point(chart, w)
        u1 = project_point(chart, wp)
    except ValueError:
        return True
    push = ((u1[0] - u0[0]) / h, (u1[1] - u0[1]) / h)
    planar = sys.eval_float(u0)
    cross = push[0] * planar[1] - push[1] * planar[0]
    dot = push[0] * planar[0] + push[1] * planar[1]
    scale = max(1.0, abs(planar[0]) + abs(planar[1]),
                abs(push[0]) + abs(push[1]))
    assert abs(cross) < 5e-5 * scale * scale, (cross, uv)
    assert dot > -5e-5 * scale * scale
    return True


def test_projection_pushforward_consistency(rng):
    random.seed(4)
    for _ in range(5):
        X = quad_field(rand_qc(rng))
        for kind, base, project in [
                ("central", (0, 0, -1), central_project),
                ("central", (1, 0, 0), central_project),
                ("stereo", (0, 0, 1), stereo_project)]:
            chart = ChartSpec(kind, base)
            for _ in range(5):
                uv = (random.uniform(-1, 1), random.uniform(-1, 1))
                _pushforward_parallel(X, chart, project, None, uv)


def test_planar_json_roundtrip(rng):
    X = quad_field(rand_qc(rng))
    sys = central_project(X, ChartSpec("central", (0, 0, -1), "c"))
    obj = sys.to_json_obj()
    back = PlanarSystem.from_json_obj(obj)
    assert back.pu == sys.pu and back.pv == sys.pv


def test_jacobian_exact(rng):
    X = quad_field(rand_qc(rng))
    sys = central_project(X, ChartSpec("central", (0, 0, -1), "c"))
    p = (Fraction(1, 3), Fraction(-1, 2))
    J = sys.jacobian(p)
    h = Fraction(1, 10 ** 6)
    approx = (sys.pu.eval((p[0] + h, p[1])) - sys.pu.eval(p)) / h
    assert abs(float(J[0][0]) - float(approx)) < 1e-4
