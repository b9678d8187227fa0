from fractions import Fraction

import pytest

from conftest import qc
from sphereflow.local import (PreconditionViolated, center_test,
                              lyapunov_from_coeffs, lyapunov_homological,
                              lyapunov_v1_closed_form, rotation_form,
                              south_pole_system)
from sphereflow.polyalg import Poly
from sphereflow.scalars import is_zero, normalize, to_float


def test_center_test_verdicts():
    # a8 = -a4, a4^2 + a5*a7 < 0, stability expression zero -> center
    assert center_test(qc(a2=1, a5=-1, a7=2)).kind == "Center"
    # nonzero stability expression -> weak focus
    v = center_test(qc(a1=1, a2=1, a5=-1, a7=2))
    assert v.kind == "WeakFocus"
    # trace != 0 at the pole
    assert center_test(qc(a4=1, a5=-1, a7=2)).kind == "NotApplicable"


def test_center_test_requires_pole_singular():
    with pytest.raises(PreconditionViolated):
        center_test(qc(a3=1, a5=-1, a7=2))


def test_v1_closed_form_matches_homological_exactly():
    samples = [
        qc(a1=1, a2=2, a4=0, a5=1, a7=-4, a8=0),        # w = 2
        qc(a1=Fraction(1, 2), a2=-1, a4=Fraction(3, 2),
           a5=Fraction(25, 8), a7=-2, a8=Fraction(-3, 2)),
    ]
    for c in samples:
        v1c = lyapunov_v1_closed_form(c)
        v1h = lyapunov_from_coeffs(c, 1).V[0]
        assert is_zero(normalize(v1c - v1h))


def test_first_nonzero_v_gauge_independent():
    # only quantities up to the first nonzero one are gauge-invariant
    c = qc(a1=1, a2=2, a4=0, a5=1, a7=-4, a8=0)
    a = lyapunov_from_coeffs(c, 2, gauge=0)
    b = lyapunov_from_coeffs(c, 2, gauge=Fraction(7, 3))
    assert a.first_nonzero == b.first_nonzero == 1
    assert is_zero(normalize(a.V[0] - b.V[0]))


def test_homological_defining_identity():
    # dH/dt must equal sum_i V_i (r^2+s^2)^(i+1) up to the solved degree
    c = qc(a1=1, a2=2, a4=0, a5=1, a7=-4, a8=0)
    sys = rotation_form(c)
    sol = lyapunov_homological(sys, 2)
    H = Poly.zero(2)
    for p in sol.H.values():
        H = H + p
    dH = sys.pu * H.partial(0) + sys.pv * H.partial(1)
    circ = Poly(2, {(2, 0): 1, (0, 2): 1})
    rhs = Poly.zero(2)
    for i, v in enumerate(sol.V):
        rhs = rhs + (circ ** (i + 2)).map_coeffs(lambda x, v=v:
                                                 normalize(x * v))
    diff = dH - rhs
    for d in range(2, 7):
        assert diff.homogeneous_part(d).is_zero()


def test_center_v1_zero_weak_focus_nonzero():
    assert is_zero(normalize(lyapunov_v1_closed_form(qc(a2=1, a5=-1, a7=2))))
    v = lyapunov_from_coeffs(qc(a1=1, a2=1, a5=-1, a7=2), 1)
    assert v.first_nonzero == 1


def test_south_pole_system_linear_part():
    sys = south_pole_system(qc(a4=2, a5=3, a7=5, a8=7))
    lp = sys.linear_part()
    assert lp == [[-2, -3], [-5, -7]]


def test_rotation_form_requires_center_pattern():
    with pytest.raises(PreconditionViolated):
        rotation_form(qc(a4=1, a8=1, a5=-1, a7=2))
    with pytest.raises(PreconditionViolated):
        rotation_form(qc(a4=0, a8=0, a5=1, a7=2))
