"""Named parameterized families of degree-2 fields on the sphere.

These are the canonical targets of the case reduction together with a few
worked example systems used throughout the test-suite, the CLI and the
numerical experiments.  The family names Family142/143/144 match the target
tokens emitted by :mod:`sphereflow.qualitative`.
"""

from __future__ import annotations

from .charts import ChartSpec, PlanarSystem, central_project, stereo_project
from .polyalg import Poly
from .scalars import div, is_zero, sign_of
from .spherefield import HomVectorField, QuadCoeffs, quad_field


class FamilyConstraint(ValueError):
    """Raised when parameters violate a family's defining constraints."""


def _qc(**kw) -> QuadCoeffs:
    vals = {f"a{i}": 0 for i in range(1, 9)}
    vals.update(kw)
    return QuadCoeffs(*(vals[f"a{i}"] for i in range(1, 9)))


def family142(a1, a2, a5, a7, a8, check: bool = True) -> HomVectorField:
    """The reduced family with a weak focus / Hopf candidate at the poles.

    Defining constraints: a1 != 0, a2*(a5+a7) - a1*a8 != 0 and -a5*a7 < 0.
    """
    if check:
        if is_zero(a1):
            raise FamilyConstraint("a1 must be nonzero")
        if is_zero(a2 * (a5 + a7) - a1 * a8):
            raise FamilyConstraint("a2*(a5+a7) - a1*a8 must be nonzero")
        if sign_of(-a5 * a7) >= 0:
            raise FamilyConstraint("-a5*a7 must be negative")
    return quad_field(_qc(a1=a1, a2=a2, a5=a5, a7=a7, a8=a8))


def family143(b5, b7, b8, check: bool = True) -> HomVectorField:
    """The reduced linear-type family (only the three z-coupling terms).

    Defining constraint: -b5*b7 < 0.
    """
    if check and sign_of(-b5 * b7) >= 0:
        raise FamilyConstraint("-b5*b7 must be negative")
    return quad_field(_qc(a5=b5, a7=b7, a8=b8))


def family144(c1, c2, c5, c7, check: bool = True) -> HomVectorField:
    """The rotated-family representative: the a8 coefficient is locked to
    c2*(c5+c7)/c1, which makes the induced chart family a rotated family in
    the parameter c2.

    Defining constraints: c1 != 0 and -c5*c7 < 0.
    """
    if is_zero(c1):
        raise FamilyConstraint("c1 must be nonzero")
    if check and sign_of(-c5 * c7) >= 0:
        raise FamilyConstraint("-c5*c7 must be negative")
    c8 = div(c2 * (c5 + c7), c1)
    return quad_field(_qc(a1=c1, a2=c2, a5=c5, a7=c7, a8=c8))


def family144_chart(c1, c2, c5, c7, check: bool = True) -> PlanarSystem:
    """Central-chart planar system of :func:`family144` at (0, 0, -1)."""
    X = family144(c1, c2, c5, c7, check=check)
    return central_project(X, ChartSpec("central", (0, 0, -1), "c"))


def center_pair_field(a5, a7) -> HomVectorField:
    """The two-parameter field (a5*y*z, a7*x*z, -(a5+a7)*x*y).

    For a5*a7 < 0 the poles (0, 0, +-1) are centers; the six singular
    points sit on the coordinate axes.
    """
    return quad_field(_qc(a5=a5, a7=a7))


def hopf_example_field(a8) -> HomVectorField:
    """One-parameter field with a Hopf bifurcation at a8 = 2 and a limit
    cycle near a8 = 9/5:

        dx = -x*y - 2*y**2 + y*z
        dy = x**2 + 2*x*y + x*z + a8*y*z
        dz = -2*x*y - a8*y**2
    """
    return quad_field(_qc(a1=-1, a2=-2, a5=1, a7=1, a8=a8))


def hopf_example_chart(a8) -> PlanarSystem:
    """Central-chart system of :func:`hopf_example_field` at (0, 0, -1).

    Its singular points are (0,0) (a saddle), (1,0) (focus; the Hopf point)
    and (-a8/(a8-4), 2/(a8-4))."""
    return central_project(hopf_example_field(a8),
                           ChartSpec("central", (0, 0, -1), "c"))


def center_example_field(a2, a5, a7) -> HomVectorField:
    """Field with centers at the poles, a2 != 0 branch:

        dx = a2*y**2 + a5*y*z,  dy = -a2*x*y + a7*x*z,  dz = -(a5+a7)*x*y.
    """
    return quad_field(_qc(a2=a2, a5=a5, a7=a7))


def center_example_stereo(a2, a5, a7) -> PlanarSystem:
    """Stereographic projection of :func:`center_example_field` from (0,0,1):

        du = -2*a5*v + 4*a2*v**2 - 2*(a5+2*a7)*u**2*v + 2*a5*v**3
        dv = -2*a7*u - 4*a2*u*v - 2*(a7+2*a5)*u*v**2 + 2*a7*u**3
    """
    return stereo_project(center_example_field(a2, a5, a7),
                          ChartSpec("stereo", (0, 0, 1), "c"))


def center_example_inverse_factor(a2, a5, a7) -> Poly:
    """Inverse integrating factor (u**2+v**2+1)*V2(u, v) of the system
    returned by :func:`center_example_stereo`."""
    u = Poly.variable(2, 0)
    v = Poly.variable(2, 1)
    one = Poly.constant(2, 1)
    v2 = (a7 * u ** 4
          + 2 * ((v * v - one) * a7 - a2 * v) * u * u
          + a7 * (one + v * v) ** 2
          + 2 * v * (2 * a5 * v + a2 * (one - v * v)))
    return (u * u + v * v + one) * v2


def invariant_circle_data(a2, a5, a7):
    """The two invariant-plane candidates of :func:`center_example_field`
    together with their cofactor slopes.

    Returns [(plane normal (0, 1, 2*a7/r), cofactor coefficient r/2)] for
    each root r = -a2 +- sqrt(a2**2 - 4*(a7**2 + a5*a7)); the planes exist
    when the discriminant is nonnegative.
    """
    import sympy

    from . import scalars

    disc = scalars.normalize(a2 * a2 - 4 * (a7 * a7 + a5 * a7))
    if sign_of(disc) < 0:
        return []
    sq = scalars.exact_sqrt(disc)
    out = []
    for s in (+1, -1):
        r = scalars.normalize(-a2 + s * sq)
        if is_zero(r):
            continue
        normal = (0, 1, scalars.normalize(sympy.radsimp(div(2 * a7, r))
                                          if isinstance(r, sympy.Expr)
                                          else div(2 * a7, r)))
        cof = div(r, 2)
        out.append((normal, cof))
    return out
