import random
from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from sphereflow.polyalg import (Poly, poly3, poly_from_records,
                                poly_to_records, reduce_mod_sphere,
                                sphere_poly)

coeffs = st.fractions(min_value=-10, max_value=10, max_denominator=8)


def poly_strategy(nvars=2, max_deg=3):
    exps = st.tuples(*([st.integers(0, max_deg)] * nvars))
    return st.dictionaries(exps, coeffs, max_size=6).map(
        lambda d: Poly(nvars, dict(d)))


@given(poly_strategy(), poly_strategy(), poly_strategy())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r
    assert (p - p).is_zero()
    assert p * Poly.constant(2, 1) == p


@given(poly_strategy(nvars=3))
@settings(max_examples=40, deadline=None)
def test_records_roundtrip(p):
    recs = poly_to_records(p)
    assert poly_from_records(recs, 3) == p


def test_records_with_radical():
    w = sympy.sqrt(5)
    p = Poly(2, {(1, 0): Fraction(1, 2) + 3 * w, (0, 2): -w})
    recs = poly_to_records(p, radicand=5)
    assert poly_from_records(recs, 2, radicand=5) == p


@given(poly_strategy(nvars=3, max_deg=4))
@settings(max_examples=40, deadline=None)
def test_reduce_mod_sphere(p):
    rem, cof = reduce_mod_sphere(p)
    assert (cof * sphere_poly() + rem - p).is_zero()
    assert all(e[2] < 2 for e in rem.terms)


def test_partial_and_eval():
    p = poly3({(2, 1, 0): 3, (0, 0, 2): Fraction(-1, 2)})
    assert p.partial(0) == poly3({(1, 1, 0): 6})
    assert p.eval((1, 2, 3)) == 6 - Fraction(9, 2)
    assert abs(p.eval_float((1.0, 2.0, 3.0)) - 1.5) < 1e-14


def test_substitute_composition():
    rng = random.Random(0)
    u, v = Poly.variable(2, 0), Poly.variable(2, 1)
    p = poly3({(1, 1, 0): 2, (0, 0, 2): 1})
    images = [u + v, u * v, v - u]
    q = p.substitute(images)
    for _ in range(10):
        a = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        b = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        pt = tuple(img.eval((a, b)) for img in images)
        assert q.eval((a, b)) == p.eval(pt)


def test_homogeneous_parts():
    p = Poly(2, {(2, 0): 1, (1, 0): 2, (0, 0): 3})
    assert not p.is_homogeneous()
    assert p.homogeneous_part(2) == Poly(2, {(2, 0): 1})
    assert p.homogeneous_part(1).degree() == 1
