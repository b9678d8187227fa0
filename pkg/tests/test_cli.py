import json
import xml.dom.minidom as minidom

import pytest

from sphereflow.cli import main


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


@pytest.fixture
def hopf_file(tmp_path):
    return write(tmp_path, "hopf.json",
                 {"coeffs": {"a1": "-1", "a2": "-2", "a5": "1", "a7": "1",
                             "a8": "9/5"}})


@pytest.fixture
def center_file(tmp_path):
    return write(tmp_path, "center.json", {"coeffs": {"a5": 1, "a7": -2}})


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_check_reports_normal_form(capsys, hopf_file):
    code, out = run(capsys, ["check", hopf_file])
    rep = json.loads(out)
    assert code == 0 and rep["tangent"] and rep["degree"] == 2
    assert rep["normal_form"]["a8"] == [9, 5]


def test_check_rejects_radial_field(capsys, tmp_path):
    f = write(tmp_path, "radial.json",
              {"P": [[1, 0, 0, 1, 1]], "Q": [[0, 1, 0, 1, 1]],
               "R": [[0, 0, 1, 1, 1]]})
    code, out = run(capsys, ["check", f])
    assert code == 2 and not json.loads(out)["tangent"]


def test_malformed_json_exit_1(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text("{nope")
    code, _ = run(capsys, ["check", str(f)])
    assert code == 1


def test_classify_with_svg(capsys, tmp_path, center_file):
    svg_path = tmp_path / "portrait.svg"
    code, out = run(capsys, ["classify", center_file,
                             "--svg", str(svg_path)])
    rep = json.loads(out)
    assert code == 0
    assert rep["portrait"]["label"] == "Fig35_TripleCenterPair"
    assert rep["singularities"]["count"] == 6
    minidom.parseString(svg_path.read_text())


def test_singularities_command(capsys, center_file):
    code, out = run(capsys, ["singularities", center_file])
    assert code == 0 and json.loads(out)["count"] == 6


def test_nocycles_structural(capsys, tmp_path):
    f = write(tmp_path, "psd.json", {"coeffs": {"a4": 1, "a8": 1}})
    code, out = run(capsys, ["nocycles", f])
    rep = json.loads(out)
    assert code == 0 and rep["conclusion"] == "NoPeriodicOrbits"
    assert rep["criterion"] == "StereoSign(a)"


def test_nocycles_with_plane(capsys, center_file):
    code, out = run(capsys, ["nocycles", center_file, "--plane", "0,0,1"])
    rep = json.loads(out)
    assert code == 0 and rep["checks"]["cofactor_identity"]


def test_hopf_scan_and_diagram(capsys, tmp_path, hopf_file):
    svg_path = tmp_path / "bif.svg"
    code, out = run(capsys, ["hopf", hopf_file, "--param", "a8",
                             "--range", "1.6:1.8:5", "--svg", str(svg_path)])
    rep = json.loads(out)
    assert code == 0
    assert rep["summary"]["cycle_params"]
    minidom.parseString(svg_path.read_text())


def test_hopf_precondition_exit_2(capsys, tmp_path):
    f = write(tmp_path, "a1zero.json",
              {"coeffs": {"a2": 1, "a5": 1, "a7": 1, "a8": 1}})
    code, _ = run(capsys, ["hopf", f, "--param", "a8", "--range", "0:1:2"])
    assert code == 2


def test_hopf_rotated_family_note(capsys, tmp_path):
    f = write(tmp_path, "locked.json",
              {"coeffs": {"a1": 2, "a2": 1, "a5": 1, "a7": 1, "a8": 1}})
    code, out = run(capsys, ["hopf", f, "--param", "a2", "--range", "1:1:1"])
    rep = json.loads(out)
    assert code == 0
    assert rep["summary"]["no_hopf_bifurcation"]
    assert "no Hopf bifurcation" in rep["summary"]["note"]


def test_conjecture_deterministic(capsys):
    code1, out1 = run(capsys, ["conjecture", "--samples", "2", "--seed", "7"])
    code2, out2 = run(capsys, ["conjecture", "--samples", "2", "--seed", "7"])
    assert code1 == code2 == 0
    assert out1 == out2                      # byte-identical reports
    rep = json.loads(out1)
    assert rep["rotated_companion_verified"] == 2
    assert rep["detection_count"] == 0


def test_conjecture_empty(capsys):
    code, out = run(capsys, ["conjecture", "--samples", "0", "--seed", "0"])
    rep = json.loads(out)
    assert code == 0 and rep["samples"] == 0 and rep["results"] == []


def test_integrate_csv(capsys, center_file):
    code, out = run(capsys, ["integrate", center_file,
                             "--from", "0,0,1", "--t", "0.5"])
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "t,x,y,z"


def test_integrate_off_sphere_exit_2(capsys, center_file):
    code, _ = run(capsys, ["integrate", center_file,
                           "--from", "1,1,1", "--t", "0.5"])
    assert code == 2
