"""Sparse multivariate polynomials with exact coefficients.

Polynomials are dicts mapping exponent tuples to nonzero exact scalars
(rationals or sympy expressions when radicals are involved).  Two fixed
variable sets are used throughout: (x, y, z) for fields in space and (u, v)
for planar chart systems.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

import sympy

from . import scalars
from .scalars import is_zero, normalize


class Poly:
    """A sparse polynomial in `nvars` variables with exact coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None, *, _clean: bool = True):
        self.nvars = nvars
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = {}
            for e, c in terms.items():
                c = normalize(c)
                if not is_zero(c):
                    self.terms[tuple(e)] = c
        else:
            self.terms = terms

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars, {}, _clean=False)

    @classmethod
    def constant(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1}, _clean=False)

    @classmethod
    def monomial(cls, exps: Iterable[int], c=1) -> "Poly":
        e = tuple(exps)
        return cls(len(e), {e: c})

    # -- basic protocol ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            other = Poly.constant(self.nvars, other)
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("Poly is unhashable")

    def copy(self) -> "Poly":
        return Poly(self.nvars, dict(self.terms), _clean=False)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d},
                    _clean=False)

    def coeff(self, exps: Iterable[int]):
        return self.terms.get(tuple(exps), 0)

    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.constant(self.nvars, other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = normalize(out.get(e, 0) + c)
            if is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        return Poly(self.nvars, out, _clean=False)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()}, _clean=False)

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = normalize(other)
            if is_zero(c):
                return Poly.zero(self.nvars)
            return Poly(self.nvars,
                        {e: normalize(k * c) for e, k in self.terms.items()})
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        out = Poly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def partial(self, i: int) -> "Poly":
        out: dict = {}
        for e, c in self.terms.items():
            if e[i] > 0:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return Poly(self.nvars, out)

    def substitute(self, images: list["Poly"]) -> "Poly":
        """Substitute variable i by images[i] (all images share one nvars)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        nv = images[0].nvars
        # cache powers of the images
        pows: list[list[Poly]] = [[Poly.constant(nv, 1)] for _ in images]
        out = Poly.zero(nv)
        for e, c in self.terms.items():
            term = Poly.constant(nv, c)
            for i, k in enumerate(e):
                while len(pows[i]) <= k:
                    pows[i].append(pows[i][-1] * images[i])
                term = term * pows[i][k]
            out = out + term
        return out

    def eval(self, point):
        """Evaluate at a point of exact scalars or floats."""
        total = 0
        for e, c in self.terms.items():
            t = c
            for xi, k in zip(point, e):
                if k:
                    t = t * xi**k
            total = total + t
        return total

    def eval_float(self, point) -> float:
        total = 0.0
        for e, c in self.terms.items():
            t = scalars.to_float(c)
            for xi, k in zip(point, e):
                if k:
                    t *= float(xi) ** k
            total += t
        return total

    def map_coeffs(self, f) -> "Poly":
        return Poly(self.nvars, {e: f(c) for e, c in self.terms.items()})

    def to_arrays(self):
        """(exponent matrix, float coefficient vector) for the numeric kernels."""
        import numpy as np

        if not self.terms:
            return (np.zeros((0, self.nvars), dtype=np.int64),
                    np.zeros(0, dtype=np.float64))
        items = sorted(self.terms.items())
        exps = np.array([e for e, _ in items], dtype=np.int64)
        coefs = np.array([scalars.to_float(c) for _, c in items], dtype=np.float64)
        return exps, coefs

    def to_sympy(self, symbols) -> sympy.Expr:
        expr = sympy.Integer(0)
        for e, c in self.terms.items():
            t = scalars.to_sympy(c)
            for s, k in zip(symbols, e):
                if k:
                    t = t * s**k
            expr += t
        return expr

    @classmethod
    def from_sympy(cls, expr: sympy.Expr, symbols) -> "Poly":
        p = sympy.Poly(sympy.expand(expr), *symbols)
        terms = {}
        for e, c in p.terms():
            terms[tuple(int(k) for k in e)] = scalars.normalize(c)
        return cls(len(symbols), terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        names = ("x", "y", "z") if self.nvars == 3 else ("u", "v")[: self.nvars]
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda t: (-sum(t[0]), t[0])):
            mono = "*".join(
                f"{n}^{k}" if k > 1 else n for n, k in zip(names, e) if k
            )
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def poly2(terms: dict) -> Poly:
    return Poly(2, terms)


def poly3(terms: dict) -> Poly:
    return Poly(3, terms)


X = Poly.variable(3, 0)
Y = Poly.variable(3, 1)
Z = Poly.variable(3, 2)
U = Poly.variable(2, 0)
V = Poly.variable(2, 1)


class AffineMap3:
    """An affine substitution (x, y, z) -> (f1, f2, f3) into target polynomials."""

    __slots__ = ("images",)

    def __init__(self, images):
        if len(images) != 3:
            raise ValueError("need three images")
        self.images = tuple(images)

    def __call__(self, p: Poly) -> Poly:
        return p.substitute(list(self.images))


def reduce_mod_sphere(p: Poly) -> tuple[Poly, Poly]:
    """Reduce a polynomial in (x, y, z) modulo x^2 + y^2 + z^2 - 1.

    Eliminates z^2 by the substitution z^2 -> 1 - x^2 - y^2, repeatedly, and
    returns (remainder, cofactor) with p == cofactor * (x^2+y^2+z^2-1) +
    remainder and no remainder monomial divisible by z^2.
    """
    if p.nvars != 3:
        raise ValueError("reduce_mod_sphere expects a polynomial in (x, y, z)")
    rem: dict = {}
    cof = Poly.zero(3)
    work = dict(p.terms)
    while work:
        (e, c) = work.popitem()
        i, j, k = e
        if k < 2:
            rem[e] = normalize(rem.get(e, 0) + c)
            if is_zero(rem[e]):
                del rem[e]
            continue
        base = (i, j, k - 2)
        cof = cof + Poly.monomial(base, c)
        # c*x^i y^j z^(k-2) * (1 - x^2 - y^2)
        for de, dc in (((0, 0, 0), 1), ((2, 0, 0), -1), ((0, 2, 0), -1)):
            e2 = (i + de[0], j + de[1], k - 2 + de[2])
            s = normalize(work.get(e2, 0) + c * dc)
            if is_zero(s):
                work.pop(e2, None)
            else:
                work[e2] = s
    return Poly(3, rem, _clean=False), cof


def sphere_poly() -> Poly:
    """x^2 + y^2 + z^2 - 1."""
    return Poly(3, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1, (0, 0, 0): -1},
                _clean=False)


# -- JSON-friendly serialization ---------------------------------------
#
# A polynomial is a list of records.  Rational coefficients use
# [e..., num, den]; coefficients of the form p + q*sqrt(d) append the
# rational pair of q, with the shared radicand d stored alongside.


def poly_to_records(p: Poly, radicand: int | None = None) -> list[list[int]]:
    recs = []
    for e, c in sorted(p.terms.items()):
        if scalars.is_rational(c):
            f = scalars.as_fraction(c)
            recs.append(list(e) + [f.numerator, f.denominator])
        else:
            if radicand is None:
                raise ValueError("irrational coefficient needs a radicand")
            expr = sympy.expand(scalars.to_sympy(c))
            q = expr.coeff(sympy.sqrt(radicand))
            r = sympy.expand(expr - q * sympy.sqrt(radicand))
            if not (q.is_Rational and r.is_Rational):
                raise ValueError(f"coefficient {c} not in Q(sqrt({radicand}))")
            recs.append(list(e) + [int(r.p), int(r.q), int(q.p), int(q.q)])
    return recs


def poly_from_records(recs, nvars: int, radicand: int | None = None) -> Poly:
    terms = {}
    for rec in recs:
        e = tuple(int(v) for v in rec[:nvars])
        rest = rec[nvars:]
        c = Fraction(int(rest[0]), int(rest[1]))
        if len(rest) >= 4:
            if radicand is None:
                raise ValueError("radical record without a radicand")
            c = scalars.to_sympy(c) + sympy.Rational(int(rest[2]), int(rest[3])) * sympy.sqrt(radicand)
        terms[e] = c
    return Poly(nvars, terms)
