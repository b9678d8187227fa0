"""Homogeneous polynomial vector fields on the unit sphere.

A field X = (P, Q, R) of homogeneous degree n is tangent to the sphere when
x*P + y*Q + z*R vanishes identically; for such fields tangency holds on all
of R^3, not just on the sphere, so the check is a polynomial identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import scalars
from .polyalg import Poly, poly_from_records, poly_to_records, reduce_mod_sphere
from .scalars import exact_sqrt, is_zero, normalize, sign_of, solve_linear_system


class FieldError(ValueError):
    pass


class NotTangent(FieldError):
    pass


class NotDegreeTwo(FieldError):
    pass


class NotInNormalForm(FieldError):
    pass


@dataclass(frozen=True)
class QuadCoeffs:
    """The eight parameters of the degree-2 tangent normal form.

    P = a1*xy + a2*y^2 + a3*z^2 + a4*xz + a5*yz
    Q = -a1*x^2 - a2*xy + a6*z^2 + a7*xz + a8*yz
    R = -a4*x^2 - a8*y^2 - (a5+a7)*xy - a3*xz - a6*yz
    """

    a1: object
    a2: object
    a3: object
    a4: object
    a5: object
    a6: object
    a7: object
    a8: object

    def __iter__(self):
        return iter((self.a1, self.a2, self.a3, self.a4,
                     self.a5, self.a6, self.a7, self.a8))

    @classmethod
    def from_dict(cls, d: dict) -> "QuadCoeffs":
        vals = []
        for i in range(1, 9):
            v = d.get(f"a{i}", 0)
            if isinstance(v, float) and not v.is_integer():
                v = Fraction(v).limit_denominator(10**12)
            vals.append(normalize(Fraction(v) if isinstance(v, float) else v))
        return cls(*vals)

    def to_dict(self) -> dict:
        out = {}
        for i, v in enumerate(self, start=1):
            f = scalars.as_fraction(v)
            out[f"a{i}"] = int(f) if f.denominator == 1 else [f.numerator, f.denominator]
        return out


class HomVectorField:
    """A polynomial vector field (P, Q, R) with homogeneous components."""

    __slots__ = ("P", "Q", "R", "degree")

    def __init__(self, P: Poly, Q: Poly, R: Poly):
        degs = {p.degree() for p in (P, Q, R) if not p.is_zero()}
        if len(degs) > 1:
            raise FieldError(f"components of mixed degrees {degs}")
        for p in (P, Q, R):
            if not p.is_homogeneous():
                raise FieldError("components must be homogeneous")
        self.P, self.Q, self.R = P, Q, R
        self.degree = degs.pop() if degs else 0

    def components(self) -> tuple[Poly, Poly, Poly]:
        return (self.P, self.Q, self.R)

    def is_zero(self) -> bool:
        return self.P.is_zero() and self.Q.is_zero() and self.R.is_zero()

    def __iter__(self):
        return iter(self.components())

    def eval_float(self, point):
        return (self.P.eval_float(point), self.Q.eval_float(point),
                self.R.eval_float(point))

    def to_arrays(self):
        return tuple(p.to_arrays() for p in self.components())

    def radial_product(self) -> Poly:
        """x*P + y*Q + z*R."""
        out = Poly.zero(3)
        for i, p in enumerate(self.components()):
            out = out + Poly.variable(3, i) * p
        return out

    def directional(self, f: Poly) -> Poly:
        """The derivative of f along the field: P f_x + Q f_y + R f_z."""
        return (self.P * f.partial(0) + self.Q * f.partial(1)
                + self.R * f.partial(2))

    def to_json_obj(self, radicand: int | None = None) -> dict:
        obj = {
            "degree": self.degree,
            "P": poly_to_records(self.P, radicand),
            "Q": poly_to_records(self.Q, radicand),
            "R": poly_to_records(self.R, radicand),
        }
        if radicand is not None:
            obj["radicand"] = radicand
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> "HomVectorField":
        if "quad" in obj:
            return quad_field(QuadCoeffs.from_dict(obj["quad"]))
        rad = obj.get("radicand")
        return cls(*(poly_from_records(obj[k], 3, rad) for k in ("P", "Q", "R")))


def is_tangent(X: HomVectorField) -> bool:
    """Exact check of the tangency identity x*P + y*Q + z*R == 0."""
    return X.radial_product().is_zero()


def quad_field(qc: QuadCoeffs) -> HomVectorField:
    a1, a2, a3, a4, a5, a6, a7, a8 = qc
    P = Poly(3, {(1, 1, 0): a1, (0, 2, 0): a2, (0, 0, 2): a3,
                 (1, 0, 1): a4, (0, 1, 1): a5})
    Q = Poly(3, {(2, 0, 0): -a1, (1, 1, 0): -a2, (0, 0, 2): a6,
                 (1, 0, 1): a7, (0, 1, 1): a8})
    R = Poly(3, {(2, 0, 0): -a4, (0, 2, 0): -a8, (1, 1, 0): -(a5 + a7),
                 (1, 0, 1): -a3, (0, 1, 1): -a6})
    return HomVectorField(P, Q, R)


def to_quad_normal_form(X: HomVectorField) -> QuadCoeffs:
    """Read the eight normal-form parameters off a degree-2 tangent field."""
    if X.is_zero():
        return QuadCoeffs(0, 0, 0, 0, 0, 0, 0, 0)
    if X.degree != 2:
        raise NotDegreeTwo(f"degree {X.degree} field")
    if not is_tangent(X):
        raise NotTangent("x*P + y*Q + z*R != 0")
    P, Q, R = X.components()
    a1 = P.coeff((1, 1, 0))
    a2 = P.coeff((0, 2, 0))
    a3 = P.coeff((0, 0, 2))
    a4 = P.coeff((1, 0, 1))
    a5 = P.coeff((0, 1, 1))
    a6 = Q.coeff((0, 0, 2))
    a7 = Q.coeff((1, 0, 1))
    a8 = Q.coeff((0, 1, 1))
    qc = QuadCoeffs(*(normalize(v) for v in (a1, a2, a3, a4, a5, a6, a7, a8)))
    back = quad_field(qc)
    if not ((back.P - P).is_zero() and (back.Q - Q).is_zero()
            and (back.R - R).is_zero()):
        raise NotInNormalForm("field is tangent but not in the 8-parameter form")
    return qc


class Rotation3:
    """An orthogonal 3x3 matrix with exact entries (columns are the images of
    the new basis vectors: old = M @ new)."""

    __slots__ = ("m",)

    def __init__(self, rows, check: bool = True):
        self.m = tuple(tuple(normalize(v) for v in row) for row in rows)
        if len(self.m) != 3 or any(len(r) != 3 for r in self.m):
            raise ValueError("need a 3x3 matrix")
        if check and not self.is_orthogonal():
            raise ValueError("matrix is not orthogonal")

    def is_orthogonal(self) -> bool:
        for i in range(3):
            for j in range(3):
                dot = sum(self.m[k][i] * self.m[k][j] for k in range(3))
                if not is_zero(normalize(dot - (1 if i == j else 0))):
                    return False
        return True

    def det_sign(self) -> int:
        m = self.m
        d = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
             - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
             + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
        return sign_of(normalize(d))

    def apply(self, vec):
        return tuple(normalize(sum(self.m[i][j] * vec[j] for j in range(3)))
                     for i in range(3))

    def apply_transpose(self, vec):
        return tuple(normalize(sum(self.m[j][i] * vec[j] for j in range(3)))
                     for i in range(3))

    def column(self, j):
        return tuple(self.m[i][j] for i in range(3))

    def to_float(self):
        return [[scalars.to_float(v) for v in row] for row in self.m]


def rotate(X: HomVectorField, M: Rotation3) -> HomVectorField:
    """Pull the field back through the change of variables old = M @ new.

    The new field is M^T X(M xnew), so rotating by the matrix that sends a
    chosen point to the south pole rewrites the field in coordinates where
    that point is (0, 0, -1).
    """
    images = [Poly(3, {tuple(1 if k == j else 0 for k in range(3)): M.m[i][j]
                       for j in range(3)})
              for i in range(3)]
    comps = [p.substitute(images) for p in X.components()]
    new = [sum((comps[i] * M.m[i][j] for i in range(3)), Poly.zero(3))
           for j in range(3)]
    return HomVectorField(*new)


def rotation_to_south_pole(p) -> Rotation3:
    """An exact rotation M with M(0,0,-1) = p (unit vector p, exact entries).

    Built by Gram-Schmidt against the two coordinate axes least aligned
    with p, so the choice is deterministic.
    """
    p = tuple(normalize(v) for v in p)
    n2 = normalize(sum(v * v for v in p))
    if not is_zero(normalize(n2 - 1)):
        raise ValueError("p must be a unit vector")
    c3 = tuple(normalize(-v) for v in p)
    # pick the axis least aligned with p
    mags = [(abs(scalars.to_float(p[i])), i) for i in range(3)]
    mags.sort()
    i0 = mags[0][1]
    e = [0, 0, 0]
    e[i0] = 1
    w = tuple(normalize(e[i] - (e[0] * c3[0] + e[1] * c3[1] + e[2] * c3[2]) * c3[i])
              for i in range(3))
    wn = exact_sqrt(normalize(sum(v * v for v in w)))
    c1 = tuple(normalize(scalars.div(v, wn)) for v in w)
    c2 = (normalize(c3[1] * c1[2] - c3[2] * c1[1]),
          normalize(c3[2] * c1[0] - c3[0] * c1[2]),
          normalize(c3[0] * c1[1] - c3[1] * c1[0]))
    return Rotation3([[c1[i], c2[i], c3[i]] for i in range(3)])


def move_singularity_to_south_pole(X: HomVectorField, p) -> tuple[HomVectorField, Rotation3]:
    """Rotate the field so the singular point p lands at (0, 0, -1)."""
    M = rotation_to_south_pole(p)
    return rotate(X, M), M


@dataclass
class Plane:
    """The plane a*x + b*y + c*z + d = 0."""

    a: object
    b: object
    c: object
    d: object = 0

    def poly(self) -> Poly:
        return Poly(3, {(1, 0, 0): self.a, (0, 1, 0): self.b,
                        (0, 0, 1): self.c, (0, 0, 0): self.d})


@dataclass
class CofactorResult:
    invariant: bool
    cofactor: Poly | None
    multiplier: Poly | None  # the multiple of (x^2+y^2+z^2-1) absorbed


def invariant_plane_cofactor(X: HomVectorField, plane: Plane) -> CofactorResult:
    """Decide whether the plane (cut with the sphere) is invariant.

    Solves X(f) = K*f + c*(x^2+y^2+z^2-1) exactly for polynomials K (degree
    n-1) and c (degree n-2); invariance of the circle only requires the
    identity modulo the sphere, hence the multiplier term.
    """
    f = plane.poly()
    lhs = X.directional(f)
    n = X.degree
    kmons = _monomials_up_to(n - 1)
    cmons = _monomials_up_to(n - 2)
    rowsmap: dict = {}
    cols = len(kmons) + len(cmons)
    sphere = {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1, (0, 0, 0): -1}
    for j, e in enumerate(kmons):
        for fe, fc in f.terms.items():
            key = tuple(a + b for a, b in zip(e, fe))
            rowsmap.setdefault(key, {})[j] = rowsmap.get(key, {}).get(j, 0) + fc
    for j, e in enumerate(cmons):
        for se, sc in sphere.items():
            key = tuple(a + b for a, b in zip(e, se))
            col = len(kmons) + j
            rowsmap.setdefault(key, {})[col] = rowsmap.get(key, {}).get(col, 0) + sc
    for e in lhs.terms:
        rowsmap.setdefault(e, {})
    keys = sorted(rowsmap)
    rows = [[rowsmap[k].get(j, 0) for j in range(cols)] for k in keys]
    rhs = [lhs.terms.get(k, 0) for k in keys]
    sol = solve_linear_system(rows, rhs)
    if sol is None:
        return CofactorResult(False, None, None)
    K = Poly(3, {e: sol[j] for j, e in enumerate(kmons)})
    c = Poly(3, {e: sol[len(kmons) + j] for j, e in enumerate(cmons)})
    return CofactorResult(True, K, c)


def _monomials_up_to(d: int):
    out = []
    for t in range(max(d, -1) + 1):
        for i in range(t + 1):
            for j in range(t - i + 1):
                out.append((i, j, t - i - j))
    return out


def first_integral_check(X: HomVectorField, num: Poly, den: Poly | None = None) -> bool:
    """Exact check that num/den is a first integral on the sphere.

    The derivative of num/den along X has numerator X(num)*den - num*X(den);
    the function is constant along orbits on the sphere iff that numerator
    reduces to zero modulo x^2 + y^2 + z^2 - 1.
    """
    if den is None:
        g = X.directional(num)
    else:
        g = X.directional(num) * den - num * X.directional(den)
    rem, _ = reduce_mod_sphere(g)
    return rem.is_zero()
