import xml.dom.minidom as minidom

from conftest import qc
from sphereflow.families import center_pair_field
from sphereflow.render import equator_invariant, render_svg
from sphereflow.spherefield import quad_field


def _parse(svg):
    return minidom.parseString(svg)


def test_svg_valid_and_disc_present():
    svg = render_svg(center_pair_field(1, -2), t_span=5.0)
    doc = _parse(svg)
    circles = doc.getElementsByTagName("circle")
    assert circles, "disc boundary circle missing"
    assert doc.getElementsByTagName("path"), "no trajectories drawn"


def test_equator_invariance_styles_boundary():
    X_inv = quad_field(qc(a5=1, a7=-1))       # third component vanishes
    X_gen = center_pair_field(1, -2)
    assert equator_invariant(X_inv)
    assert not equator_invariant(X_gen)
    svg_inv = render_svg(X_inv, t_span=2.0)
    svg_gen = render_svg(X_gen, t_span=2.0)

    def boundary(svg):
        doc = _parse(svg)
        return doc.getElementsByTagName("circle")[0]

    assert not boundary(svg_inv).getAttribute("stroke-dasharray")
    assert boundary(svg_gen).getAttribute("stroke-dasharray")


def test_saddle_glyphs_and_separatrices():
    svg = render_svg(center_pair_field(1, -2), t_span=5.0)
    # saddle glyphs are drawn in a distinctive stroke color
    assert "#c0392b" in svg
    # separatrix paths use their own color
    assert "#e67e22" in svg


def test_zero_field_renders():
    svg = render_svg(quad_field(qc()))
    _parse(svg)
