import math

from conftest import qc, rand_qc
from sphereflow.families import center_pair_field
from sphereflow.singular import (brute_force_singularities,
                                 classify_linearization,
                                 enumerate_singularities, linearize_at)
from sphereflow.spherefield import quad_field


def test_center_pair_six_points():
    X = center_pair_field(1, -2)
    s = enumerate_singularities(X)
    assert s.finite and len(s.points) == 6
    kinds = {}
    for rep in s.points:
        axis = max(range(3), key=lambda i: abs(rep.point[i]))
        kinds.setdefault(axis, set()).add(rep.kind)
    # index sum must be 2: four centers (+1 each) and two saddles (-1 each)
    assert kinds[2] == {"center-or-weak-focus"}
    assert kinds[0] == {"center-or-weak-focus"}
    assert kinds[1] == {"saddle"}


def test_even_counts_and_antipodal(rng):
    for _ in range(8):
        s = enumerate_singularities(quad_field(rand_qc(rng)))
        if not s.finite:
            continue
        assert len(s.points) % 2 == 0 and len(s.points) <= 6
        pts = [rep.point for rep in s.points]
        for p in pts:
            assert any(max(abs(p[i] + q[i]) for i in range(3)) < 1e-9
                       for q in pts)
        for p in pts:
            assert abs(sum(v * v for v in p) - 1) < 1e-12


def test_infinite_singular_set_detected():
    # rotation about the z-axis: the equator is a circle of singularities
    s = enumerate_singularities(quad_field(qc(a5=1, a7=-1)))
    assert not s.finite
    assert s.circles


def test_whole_sphere_singular():
    s = enumerate_singularities(quad_field(qc()))
    assert s.whole_sphere and not s.finite


def test_brute_force_matches(rng):
    X = quad_field(qc(a1=-1, a2=-2, a5=1, a7=1, a8=2))
    s = enumerate_singularities(X)
    oracle = brute_force_singularities(X, grid_n=10)
    assert len(oracle) == len(s.points)
    for rep in s.points:
        d = min(max(abs(rep.point[i] - q[i]) for i in range(3))
                for q in oracle)
        assert d < 1e-9


def test_linearize_exact_matches_float():
    X = center_pair_field(1, -2)
    B = linearize_at(X, (0, 0, -1), exact=True)
    Bf = linearize_at(X, (0.0, 0.0, -1.0), exact=False)
    for i in range(2):
        for j in range(2):
            assert abs(float(B[i][j]) - Bf[i][j]) < 1e-12


def test_classify_linearization_labels():
    assert classify_linearization(0.0, -1.0, None) == "saddle"
    assert classify_linearization(3.0, 1.0, [[1, -1], [1, 1]]) in (
        "node", "focus", "node-or-focus")
    assert classify_linearization(0.0, 2.0, [[0, 1], [-2, 0]]) == \
        "center-or-weak-focus"
    assert classify_linearization(1.0, 0.0, None) == "semi-hyperbolic"
