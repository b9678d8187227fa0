"""Exact scalar arithmetic used for polynomial coefficients.

Coefficients are either rational (int / fractions.Fraction) or, when square
roots enter (normalizing rotation axes, discriminants), exact sympy
expressions.  Everything here is about keeping zero-tests exact so that
identities such as tangency or cofactor relations can be certified rather
than approximated.
"""

from __future__ import annotations

from fractions import Fraction

import sympy


def is_exact(c) -> bool:
    """True if c is an exact scalar (rational or sympy expression)."""
    return isinstance(c, (int, Fraction, sympy.Expr)) and not isinstance(c, bool)


def is_zero(c) -> bool:
    """Exact zero test for a coefficient."""
    if isinstance(c, sympy.Expr):
        if c.is_zero is not None:
            return bool(c.is_zero)
        return sympy.simplify(sympy.radsimp(sympy.expand(c))) == 0
    return c == 0


def normalize(c):
    """Canonicalize a coefficient: ints stay ints, Fractions collapse to int
    when integral, sympy expressions are expanded and demoted to Fraction when
    rational."""
    if isinstance(c, sympy.Expr):
        c = sympy.expand(c)
        if c.is_Rational:
            return normalize(Fraction(int(c.p), int(c.q)))
        return c
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


def to_sympy(c) -> sympy.Expr:
    if isinstance(c, sympy.Expr):
        return c
    if isinstance(c, Fraction):
        return sympy.Rational(c.numerator, c.denominator)
    return sympy.Integer(c)


def to_float(c) -> float:
    if isinstance(c, sympy.Expr):
        return float(c.evalf())
    return float(c)


def as_fraction(c) -> Fraction:
    """Convert to Fraction, raising ValueError if c is irrational."""
    if isinstance(c, sympy.Expr):
        c = sympy.nsimplify(sympy.expand(c), rational=False)
        if c.is_Rational:
            return Fraction(int(c.p), int(c.q))
        raise ValueError(f"not a rational scalar: {c}")
    return Fraction(c)


def is_rational(c) -> bool:
    if isinstance(c, sympy.Expr):
        return bool(c.is_Rational)
    return isinstance(c, (int, Fraction))


def exact_sqrt(c):
    """Exact square root of a nonnegative scalar.

    Returns a Fraction/int when c is a perfect square of a rational, otherwise
    a sympy expression.
    """
    if isinstance(c, sympy.Expr):
        return sympy.sqrt(c)
    f = Fraction(c)
    if f < 0:
        raise ValueError("negative radicand")
    ns = _isqrt_exact(f.numerator)
    ds = _isqrt_exact(f.denominator)
    if ns is not None and ds is not None:
        return normalize(Fraction(ns, ds))
    return sympy.sqrt(sympy.Rational(f.numerator, f.denominator))


def div(a, b):
    """Exact division of scalars (never float-coerces int/int)."""
    if isinstance(a, sympy.Expr) or isinstance(b, sympy.Expr):
        return normalize(sympy.radsimp(to_sympy(a) / to_sympy(b)))
    return normalize(Fraction(a) / Fraction(b))


def _isqrt_exact(n: int):
    import math

    r = math.isqrt(n)
    return r if r * r == n else None


def sign_of(c) -> int:
    """Exact sign (-1, 0, +1) of a real exact scalar."""
    if isinstance(c, sympy.Expr):
        if is_zero(c):
            return 0
        s = sympy.sign(sympy.simplify(c))
        if s.is_Integer:
            return int(s)
        # fall back to high-precision numerics for gnarly radicals
        v = c.evalf(50)
        return 1 if v > 0 else -1
    return (c > 0) - (c < 0)


def solve_linear_system(rows, rhs):
    """Solve an exact linear system by Gaussian elimination.

    rows: list of lists of exact scalars (m x n), rhs: list of m scalars.
    Returns one solution (list of n scalars, free variables set to 0), or
    None when the system is inconsistent.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [[normalize(v) for v in r] + [normalize(rhs[i])] for i, r in enumerate(rows)]
    piv_cols = []
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, m):
            if not is_zero(a[i][col]):
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][col]
        inv = _inv(pv)
        a[r] = [normalize(v * inv) for v in a[r]]
        for i in range(m):
            if i != r and not is_zero(a[i][col]):
                f = a[i][col]
                a[i] = [normalize(a[i][j] - f * a[r][j]) for j in range(n + 1)]
        piv_cols.append(col)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if not is_zero(a[i][n]):
            return None
    sol = [0] * n
    for i, col in enumerate(piv_cols):
        sol[col] = a[i][n]
    return sol


def _inv(c):
    if isinstance(c, sympy.Expr):
        return sympy.radsimp(1 / c)
    return Fraction(1, 1) / Fraction(c)
