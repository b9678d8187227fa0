import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import qc, rand_qc, rand_rotation
from sphereflow.polyalg import Poly, poly3
from sphereflow.spherefield import (FieldError, HomVectorField, Plane,
                                    QuadCoeffs, Rotation3, first_integral_check,
                                    invariant_plane_cofactor, is_tangent,
                                    quad_field, rotate,
                                    rotation_to_south_pole,
                                    to_quad_normal_form)

fracs = st.fractions(min_value=-9, max_value=9, max_denominator=6)


@given(st.tuples(*([fracs] * 8)))
@settings(max_examples=100, deadline=None)
def test_normal_form_tangent_and_roundtrip(vals):
    c = QuadCoeffs(*vals)
    X = quad_field(c)
    assert is_tangent(X)
    assert tuple(to_quad_normal_form(X)) == tuple(c)


def test_radial_field_not_tangent():
    X = HomVectorField(poly3({(1, 0, 0): 1}), poly3({(0, 1, 0): 1}),
                       poly3({(0, 0, 1): 1}))
    assert not is_tangent(X)
    with pytest.raises(FieldError):
        to_quad_normal_form(X)


def test_mixed_degree_rejected():
    with pytest.raises(FieldError):
        HomVectorField(poly3({(1, 0, 0): 1}), poly3({(0, 2, 0): 1}),
                       Poly.zero(3))


def test_rotate_preserves_tangency(rng):
    for _ in range(10):
        X = quad_field(rand_qc(rng))
        M = rand_rotation(rng)
        Y = rotate(X, M)
        assert is_tangent(Y)
        # rotation composes: rotating back restores the field
        Mt = Rotation3(tuple(zip(*M.m)))
        assert tuple(to_quad_normal_form(rotate(Y, Mt))) == \
            tuple(to_quad_normal_form(X))


def test_rotation_to_south_pole():
    for p in [(0, 0, 1), (1, 0, 0), (Fraction(3, 5), 0, Fraction(-4, 5))]:
        M = rotation_to_south_pole(p)
        assert M.is_orthogonal()
        # new coordinates of p (old = M @ new) are the south pole
        assert tuple(M.apply_transpose(p)) == (0, 0, -1)


def test_rotation_orthogonality_enforced():
    with pytest.raises(ValueError):
        Rotation3(((1, 1, 0), (0, 1, 0), (0, 0, 1)))


def test_rotate_commutes_with_evaluation(rng):
    # (rotate X)(p) == M X(M^T p) pointwise
    X = quad_field(rand_qc(rng))
    M = rand_rotation(rng)
    Y = rotate(X, M)
    for _ in range(5):
        p = tuple(Fraction(rng.randint(-3, 3), 2) for _ in range(3))
        q = M.apply_transpose(p)
        want = M.apply(tuple(c.eval(q) for c in X.components()))
        got = tuple(c.eval(p) for c in Y.components())
        assert tuple(want) == got


def test_sphere_is_first_integral(rng):
    X = quad_field(rand_qc(rng))
    sphere = poly3({(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1, (0, 0, 0): -1})
    assert X.directional(sphere).is_zero()


def test_invariant_plane_cofactor():
    # z = 0 is invariant iff R vanishes on it; a5 = -a7 kills R entirely
    X = quad_field(qc(a5=1, a7=-1))
    res = invariant_plane_cofactor(X, Plane(0, 0, 1))
    assert res.invariant


def test_first_integral_check():
    X = quad_field(qc(a5=1, a7=-1))
    # x^2 + y^2 is constant along the rotation about the z-axis
    assert first_integral_check(X, poly3({(2, 0, 0): 1, (0, 2, 0): 1}))
    assert not first_integral_check(X, poly3({(1, 0, 0): 1}))


def test_json_roundtrip(rng):
    X = quad_field(rand_qc(rng))
    obj = X.to_json_obj()
    Y = HomVectorField.from_json_obj(obj)
    assert tuple(to_quad_normal_form(Y)) == tuple(to_quad_normal_form(X))
