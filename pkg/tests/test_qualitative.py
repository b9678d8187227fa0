from fractions import Fraction

import pytest

from conftest import qc, rand_qc
from sphereflow import families
from sphereflow.polyalg import Poly
from sphereflow.qualitative import (NotInScope, PORTRAIT_LABELS,
                                    case_reduce,
                                    inverse_integrating_factor_check,
                                    nocycles_central, nocycles_stereo,
                                    portrait_classify, rotated_family_check,
                                    sign_definiteness, tangency_count)
from sphereflow.qualitative import BranchCoordinateZero
from sphereflow.spherefield import quad_field, rotate, to_quad_normal_form


# -- sign definiteness -------------------------------------------------

def test_sign_definiteness_certificates():
    u2 = Poly(2, {(2, 0): 1})
    assert sign_definiteness(u2).status == "PSD"
    assert sign_definiteness(Poly.zero(2)).status == "PSD"
    neg = Poly(2, {(2, 0): -1, (0, 4): -3})
    assert sign_definiteness(neg).status == "NSD"
    quad = Poly(2, {(2, 0): 1, (1, 1): 1, (0, 2): 1})
    st = sign_definiteness(quad)
    assert st.status == "PSD" and "quadratic" in st.certificate


def test_sign_definiteness_indefinite_witnesses_exact():
    p = Poly(2, {(2, 0): 1, (1, 1): 3, (0, 2): 1})
    st = sign_definiteness(p)
    assert st.status == "Indefinite"
    (pt1, v1), (pt2, v2) = st.witnesses
    assert p.eval(pt1) == v1 and p.eval(pt2) == v2
    assert (v1 > 0) != (v2 > 0)


def test_sign_definiteness_honest_unknown():
    # PSD (it is a sum plus 1 > 0) but with no structural certificate and
    # no sign change: must come back Unknown, not a false claim
    p = Poly(2, {(4, 0): 1, (2, 2): -1, (0, 4): 1, (0, 0): 1})
    assert sign_definiteness(p).status == "Unknown"


# -- nonexistence criteria ----------------------------------------------

def test_nocycles_stereo_structural():
    v = nocycles_stereo(quad_field(qc(a4=1, a8=1)))
    assert v.conclusion == "NoPeriodicOrbits"
    assert v.criterion == "StereoSign(a)"
    assert "sampled" not in v.witness_sign.certificate


def test_nocycles_stereo_inconclusive_on_center():
    v = nocycles_stereo(quad_field(qc(a2=1, a5=-1, a7=2)))
    assert v.conclusion == "Inconclusive"


def test_nocycles_central_on_center_example():
    X = quad_field(qc(a2=1, a5=-1, a7=2))
    v = nocycles_central(X, (0, 0, 1))
    assert v.checks["f_positive"] and v.checks["cofactor_identity"]


def test_nocycles_central_branch_guard():
    X = quad_field(qc(a4=1, a8=1))
    with pytest.raises(BranchCoordinateZero):
        nocycles_central(X, (1, 0, 0), branch=1)   # branch 1 needs c != 0


# -- tangency counting --------------------------------------------------

def test_tangency_invariant_circle():
    X = quad_field(qc(a5=1, a7=-1))    # equator formed by orbits
    assert tangency_count(X, (0, 0, 1)) == ("Invariant", None)


def test_tangency_counts_bounded(rng):
    for _ in range(10):
        X = quad_field(rand_qc(rng))
        plane = tuple(Fraction(rng.randint(-3, 3)) for _ in range(3))
        if all(v == 0 for v in plane):
            continue
        kind, k = tangency_count(X, plane)
        assert kind == "Invariant" or k <= 4


# -- canonical reductions ------------------------------------------------

def test_case_reduce_not_in_scope():
    with pytest.raises(NotInScope):
        case_reduce(qc(a3=1, a4=1, a8=-1))         # not chart aligned
    with pytest.raises(NotInScope):
        case_reduce(qc(a5=1, a7=-2))               # poles not saddles


def test_case_reduce_reconstruction(rng):
    samples = [qc(a1=1, a4=1, a5=3, a7=1, a8=1),
               qc(a2=1, a5=1, a7=1, a8=2),
               qc(a4=1, a5=2, a7=1, a8=1)]
    for c in samples:
        r = case_reduce(c)
        assert r.rotation.is_orthogonal()
        recon = to_quad_normal_form(rotate(quad_field(c), r.rotation))
        assert tuple(recon) == tuple(r.coeffs)
        assert r.coeffs.a4 == 0 and r.coeffs.a3 == 0 and r.coeffs.a6 == 0


# -- portraits -----------------------------------------------------------

REPRESENTATIVES = {
    "Fig3_LinearlyZero": qc(),
    "Fig2a_SingularCircle": qc(a1=1, a2=1, a4=1, a5=1, a7=-1, a8=-1),
    "Fig2b_SingularCircle": qc(a5=1, a7=-1),
    "Fig31_NilpotentCusp": qc(a1=1, a4=1, a5=2, a7=Fraction(-1, 2), a8=-1),
    "Fig32_NilpotentCuspA2Zero": qc(a1=2, a2=-1, a4=1, a5=2,
                                    a7=Fraction(-1, 2), a8=-1),
    "Fig33a": qc(a2=1, a5=-2, a7=1),
    "Fig33b": qc(a2=2, a5=Fraction(-1, 2), a7=1),
    "Fig33c_CenterFoci": qc(a2=1, a5=Fraction(-1, 2), a7=1),
    "Fig35_TripleCenterPair": qc(a5=1, a7=-2),
    "Fig36_SaddleNodes": qc(a1=1, a7=1, a8=1),
    "Fig37_TwoSingularities": qc(a1=1, a8=1),
    "Fig38_SaddleNodesFoci": qc(a2=1, a7=1, a8=1),
    "Fig41_Nondegenerate": qc(a1=-1, a2=-2, a5=1, a7=1, a8=Fraction(9, 5)),
}


def test_every_label_has_a_representative():
    assert set(REPRESENTATIVES) == set(PORTRAIT_LABELS)
    for label, c in REPRESENTATIVES.items():
        got = portrait_classify(quad_field(c))
        assert got.label == label, (label, got.full_label)


def test_nondegenerate_is_modulo_limit_cycles():
    got = portrait_classify(quad_field(REPRESENTATIVES["Fig41_Nondegenerate"]))
    assert got.modulo_limit_cycles and got.subtype == "saddle+4"


# -- rotated families and integrating factors ----------------------------

def test_rotated_family_positive_and_negative():
    chk = rotated_family_check(
        lambda m: families.family144_chart(1, m, 1, 1))
    assert chk.rotated and chk.sign == 1
    # constant family: determinant degenerates
    fixed = families.family144_chart(1, Fraction(1, 2), 1, 1)
    chk2 = rotated_family_check(lambda m: fixed)
    assert not chk2.rotated and chk2.degenerate


def test_inverse_integrating_factor_negative_control():
    sys = families.center_example_stereo(1, 1, 1)
    V = families.center_example_inverse_factor(1, 1, 1)
    assert inverse_integrating_factor_check(sys, V)
    bad = V + Poly(2, {(1, 0): 1})
    assert not inverse_integrating_factor_check(sys, bad)
