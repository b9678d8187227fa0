"""Static SVG rendering of global phase portraits on the Poincaré disc.

The southern hemisphere is projected orthogonally onto the equatorial plane
(a unit disc).  The equator circle is drawn solid when the equator is an
invariant circle of the field and dotted otherwise; singularities get
type-coded glyphs, saddle separatrices are integrated from small offsets
along the eigenvectors, and a fixed 12-orbit background grid fills the disc.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from .numerics import StepFailure, integrate_sphere
from .polyalg import Poly
from .singular import enumerate_singularities
from .spherefield import HomVectorField

_SIZE = 520.0
_MARGIN = 20.0
_R = (_SIZE - 2 * _MARGIN) / 2.0


def _to_px(u, v):
    return (_SIZE / 2.0 + u * _R, _SIZE / 2.0 - v * _R)


def equator_invariant(X: HomVectorField) -> bool:
    """The equator is invariant iff the third component vanishes on z=0."""
    R = X.R
    on_equator = R.substitute([Poly.variable(2, 0), Poly.variable(2, 1),
                               Poly.zero(2)])
    return on_equator.is_zero()


def _paths_for_trajectory(points) -> list[str]:
    """Southern-hemisphere polyline pieces in pixel coordinates."""
    paths = []
    run: list[tuple] = []
    for x, y, z in points:
        if z <= 1e-12:
            run.append(_to_px(x, y))
        elif run:
            if len(run) > 1:
                paths.append(run)
            run = []
    if len(run) > 1:
        paths.append(run)
    out = []
    for run in paths:
        d = "M " + " L ".join(f"{px:.2f} {py:.2f}" for px, py in run)
        out.append(d)
    return out


def _glyph(kind: str, px, py) -> str:
    if kind == "saddle":
        s = 6
        return (f'<path d="M {px-s:.1f} {py-s:.1f} L {px+s:.1f} {py+s:.1f} '
                f'M {px-s:.1f} {py+s:.1f} L {px+s:.1f} {py-s:.1f}" '
                'stroke="#c0392b" stroke-width="2" fill="none"/>')
    if kind in ("center", "center-or-weak-focus"):
        return (f'<circle cx="{px:.1f}" cy="{py:.1f}" r="5" fill="none" '
                'stroke="#27ae60" stroke-width="2"/>')
    if kind in ("node", "focus", "node-or-focus"):
        return (f'<circle cx="{px:.1f}" cy="{py:.1f}" r="4" '
                'fill="#2c3e50"/>')
    return (f'<rect x="{px-4:.1f}" y="{py-4:.1f}" width="8" height="8" '
            'fill="none" stroke="#8e44ad" stroke-width="2"/>')


def _background_seeds(n: int = 12):
    seeds = []
    for k in range(n):
        phi = 2 * math.pi * (k + 0.5) / n
        theta = 2.1 + 0.5 * (k % 3)      # southern latitudes
        seeds.append((math.sin(theta) * math.cos(phi),
                      math.sin(theta) * math.sin(phi),
                      math.cos(theta)))
    return seeds


def _separatrix_seeds(X, reports):
    seeds = []
    for rep in reports:
        if rep.kind != "saddle":
            continue
        B = np.array(rep.linearization, dtype=float)
        w, vecs = np.linalg.eig(B)
        # chart directions back on the sphere: use the tangent basis at the
        # point from the rotation taking it to the south pole
        from .spherefield import rotation_to_south_pole
        M = rotation_to_south_pole(rep.point)
        c1 = np.array([float(v) for v in M.column(0)])
        c2 = np.array([float(v) for v in M.column(1)])
        p = np.array(rep.point, dtype=float)
        for i in range(2):
            if abs(w[i].imag) > 1e-9:
                continue
            direction = vecs[:, i].real
            for sgn in (1.0, -1.0):
                q = p + 1e-4 * sgn * (direction[0] * c1 + direction[1] * c2)
                q = q / np.linalg.norm(q)
                seeds.append((tuple(q), 1.0 if w[i].real > 0 else -1.0))
    return seeds


def render_svg(X: HomVectorField, title: str = "", t_span: float = 30.0,
               tol: float = 1e-8) -> str:
    """Portrait of the southern hemisphere on the Poincaré disc."""
    sing = enumerate_singularities(X)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE:.0f}" '
        f'height="{_SIZE:.0f}" viewBox="0 0 {_SIZE:.0f} {_SIZE:.0f}">',
        f'<rect width="{_SIZE:.0f}" height="{_SIZE:.0f}" fill="white"/>',
    ]
    if title:
        parts.append(f'<text x="{_SIZE/2:.0f}" y="14" text-anchor="middle" '
                     f'font-family="monospace" font-size="12">'
                     f'{escape(title)}</text>')
    dash = '' if equator_invariant(X) else ' stroke-dasharray="2 6"'
    parts.append(f'<circle cx="{_SIZE/2:.0f}" cy="{_SIZE/2:.0f}" '
                 f'r="{_R:.1f}" fill="none" stroke="black" '
                 f'stroke-width="1.5"{dash}/>')

    def draw(seed, sign, color, width):
        try:
            traj = integrate_sphere(X, seed, (0.0, sign * t_span), tol)
        except (StepFailure, ValueError):
            return
        for d in _paths_for_trajectory(traj.points):
            parts.append(f'<path d="{d}" fill="none" stroke="{color}" '
                         f'stroke-width="{width}"/>')

    if not X.is_zero():
        for seed in _background_seeds():
            draw(seed, 1.0, "#b0c4de", 0.8)
            draw(seed, -1.0, "#b0c4de", 0.8)
        if sing.finite:
            for (pt, sign) in _separatrix_seeds(X, sing.points):
                draw(pt, sign, "#e67e22", 1.4)
    if sing.finite:
        for rep in sing.points:
            x, y, z = rep.point
            if z <= 1e-9:
                px, py = _to_px(x, y)
                parts.append(_glyph(rep.kind, px, py))
    parts.append("</svg>")
    return "\n".join(parts)
