import os
import subprocess
import sys

import numpy as np
import pytest

from sphereflow.families import hopf_example_field
from sphereflow.kernels import (BACKEND, STATUS_NO_RETURN, STATUS_OK,
                                _py_kernels)
from sphereflow.numerics import field_arrays

compiled = pytest.importorskip("sphereflow.kernels._kernels")


def _setup():
    X = hopf_example_field(9 / 5)
    exps, coeffs = field_arrays(X.components(), 3)
    x0 = np.array([0.3, 0.4, -np.sqrt(1 - 0.25)])
    return exps, coeffs, x0


def test_backend_is_compiled_when_available():
    assert BACKEND == "compiled"


def test_integrate_backends_agree():
    exps, coeffs, x0 = _setup()
    res_c = compiled.rk45_integrate(exps, coeffs, x0, 0.0, 20.0,
                                    1e-10, 1e-12, True)
    res_p = _py_kernels.rk45_integrate(exps, coeffs, x0, 0.0, 20.0,
                                       1e-10, 1e-12, True)
    assert res_c[0] == res_p[0] == STATUS_OK
    assert res_c[3] == res_p[3]                      # same step count
    yc, yp = np.asarray(res_c[2]), np.asarray(res_p[2])
    assert yc.shape == yp.shape
    assert np.max(np.abs(yc - yp)) < 1e-8


def test_section_backends_agree():
    from sphereflow.families import hopf_example_chart

    sys2 = hopf_example_chart(9 / 5)
    exps, coeffs = field_arrays((sys2.pu, sys2.pv), 2)
    x0 = np.array([2.0, 0.0])
    anchor = np.array([1.0, 0.0])
    direction = np.array([1.0, 0.0])
    sc, tc, yc = compiled.rk45_to_section(exps, coeffs, x0, anchor,
                                          direction, 200.0, 1e-10, 1e-12)
    sp, tp, yp = _py_kernels.rk45_to_section(exps, coeffs, x0, anchor,
                                             direction, 200.0, 1e-10, 1e-12)
    assert sc == sp == STATUS_OK
    assert abs(tc - tp) < 1e-9
    assert np.max(np.abs(np.asarray(yc) - np.asarray(yp))) < 1e-9


def test_no_return_status():
    # planar system with an escaping orbit: du = u^2 leaves the 1e3 disc
    exps = np.array([[[2, 0]], [[0, 0]]], dtype=np.int64)
    coeffs = np.array([[1.0], [0.0]])
    x0 = np.array([1.0, 0.0])
    anchor = np.array([0.0, 1.0])
    direction = np.array([1.0, 0.0])
    status, _, _ = _py_kernels.rk45_to_section(
        exps, coeffs, x0, anchor, direction, 50.0, 1e-9, 1e-11)
    assert status == STATUS_NO_RETURN


def test_pure_python_env_override():
    code = ("import sphereflow.kernels as k; print(k.BACKEND)")
    env = dict(os.environ, SPHEREFLOW_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
