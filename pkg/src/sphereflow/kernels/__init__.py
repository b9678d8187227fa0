"""Numeric integration kernels with a compiled/pure-Python dual route.

Imports the compiled extension when available, otherwise falls back to the
pure-Python reference implementation.  `BACKEND` records which one is live;
set SPHEREFLOW_PURE_PYTHON=1 to force the fallback.
"""

import os

if os.environ.get("SPHEREFLOW_PURE_PYTHON"):
    from . import _py_kernels as _impl
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "compiled"
    except ImportError:
        from . import _py_kernels as _impl
        BACKEND = "python"

STATUS_OK = _impl.STATUS_OK
STATUS_NO_RETURN = _impl.STATUS_NO_RETURN
STATUS_STEP_FAILURE = _impl.STATUS_STEP_FAILURE

rk45_integrate = _impl.rk45_integrate
rk45_to_section = _impl.rk45_to_section

__all__ = ["BACKEND", "rk45_integrate", "rk45_to_section", "STATUS_OK",
           "STATUS_NO_RETURN", "STATUS_STEP_FAILURE"]
