"""Pure-Python reference implementation of the numeric integration kernels.

The compiled extension (`_kernels.pyx`) mirrors this module line for line;
both expose the same two entry points so the selector in `__init__` can swap
them freely:

- rk45_integrate: adaptive Dormand-Prince 5(4) propagation of a polynomial
  vector field given as exponent/coefficient arrays, with optional
  renormalization onto the unit sphere after each accepted step.
- rk45_to_section: propagate until the trajectory crosses an anchored ray,
  locating the crossing by bisection on a cubic Hermite interpolant.

Both are deterministic: no randomness, fixed step-control policy.
"""

import numpy as np

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.array([
    [0, 0, 0, 0, 0, 0],
    [1 / 5, 0, 0, 0, 0, 0],
    [3 / 40, 9 / 40, 0, 0, 0, 0],
    [44 / 45, -56 / 15, 32 / 9, 0, 0, 0],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0, 0],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656, 0],
])
_B5 = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_E = np.array([35 / 384 - 5179 / 57600, 0.0, 500 / 1113 - 7571 / 16695,
               125 / 192 - 393 / 640, -2187 / 6784 + 92097 / 339200,
               11 / 84 - 187 / 2100, -1 / 40])

STATUS_OK = 0
STATUS_NO_RETURN = 1
STATUS_STEP_FAILURE = 2


def _eval_field(exps, coeffs, y, out):
    """out[i] = sum_k coeffs[i, k] * prod_j y[j] ** exps[i, k, j]."""
    ncomp, nterms, nvars = exps.shape
    for i in range(ncomp):
        total = 0.0
        for k in range(nterms):
            c = coeffs[i, k]
            if c == 0.0:
                continue
            term = c
            for j in range(nvars):
                e = exps[i, k, j]
                for _ in range(e):
                    term *= y[j]
            total += term
        out[i] = total


def _rk45_step(exps, coeffs, y, h, ks):
    """Cleaner single attempted step: returns (y5, err)."""
    n = y.shape[0]
    _eval_field(exps, coeffs, y, ks[0])
    for s in range(1, 6):
        ytmp = y + h * (ks[:s].T @ _A[s][:s])
        _eval_field(exps, coeffs, ytmp, ks[s])
    # stage 7 uses the 5th-order solution point (FSAL structure)
    y5 = y + h * (ks[:6].T @ _B5[:6])
    _eval_field(exps, coeffs, y5, ks[6])
    err = h * (ks[:7].T @ _E)
    return y5, err


def _error_norm(err, y, ynew, rtol, atol):
    sc = atol + rtol * np.maximum(np.abs(y), np.abs(ynew))
    return float(np.sqrt(np.mean((err / sc) ** 2)))


def rk45_integrate(exps, coeffs, x0, t0, t1, rtol, atol, renorm,
                   max_steps=200000):
    """Adaptive propagation from t0 to t1.

    Returns (status, ts, ys, nsteps, nrejected); ts/ys include both
    endpoints and every accepted step.
    """
    exps = np.ascontiguousarray(exps, dtype=np.int64)
    coeffs = np.ascontiguousarray(coeffs, dtype=np.float64)
    y = np.array(x0, dtype=np.float64)
    n = y.shape[0]
    ks = np.zeros((7, n))
    direction = 1.0 if t1 >= t0 else -1.0
    t = t0
    ts = [t0]
    ys = [y.copy()]
    h = direction * min(1e-3, abs(t1 - t0) if t1 != t0 else 1e-3)
    nsteps = 0
    nrej = 0
    while direction * (t1 - t) > 1e-15:
        if nsteps + nrej > max_steps:
            return (STATUS_STEP_FAILURE, np.array(ts), np.array(ys),
                    nsteps, nrej)
        if direction * (t + h - t1) > 0:
            h = t1 - t
        ynew, err = _rk45_step(exps, coeffs, y, h, ks)
        enorm = _error_norm(err, y, ynew, rtol, atol)
        if enorm <= 1.0:
            t += h
            y = ynew
            if renorm:
                y = y / np.sqrt(np.dot(y, y))
            ts.append(t)
            ys.append(y.copy())
            nsteps += 1
            factor = 5.0 if enorm == 0.0 else min(5.0, 0.9 * enorm ** -0.2)
            h *= factor
        else:
            nrej += 1
            h *= max(0.1, 0.9 * enorm ** -0.2)
            if abs(h) < 1e-14:
                return (STATUS_STEP_FAILURE, np.array(ts), np.array(ys),
                        nsteps, nrej)
    return STATUS_OK, np.array(ts), np.array(ys), nsteps, nrej


def _hermite(y0, f0, y1, f1, h, theta):
    """Cubic Hermite interpolation on one step."""
    t2 = theta * theta
    t3 = t2 * theta
    h00 = 2 * t3 - 3 * t2 + 1
    h10 = t3 - 2 * t2 + theta
    h01 = -2 * t3 + 3 * t2
    h11 = t3 - t2
    return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1


def rk45_to_section(exps, coeffs, x0, anchor, direction, t_max, rtol, atol,
                    bound=1e3, min_time=1e-8, bisect_iters=80):
    """Integrate forward until the orbit crosses the ray
    anchor + s*direction (s > 0) in the same orientation as at departure.

    Returns (status, t_cross, y_cross).  `status` is STATUS_NO_RETURN when
    the orbit leaves the disc of radius `bound` or exceeds t_max.
    """
    exps = np.ascontiguousarray(exps, dtype=np.int64)
    coeffs = np.ascontiguousarray(coeffs, dtype=np.float64)
    y = np.array(x0, dtype=np.float64)
    anchor = np.asarray(anchor, dtype=np.float64)
    d = np.asarray(direction, dtype=np.float64)
    d = d / np.sqrt(np.dot(d, d))
    ks = np.zeros((7, y.shape[0]))

    def gfun(p):
        return d[0] * (p[1] - anchor[1]) - d[1] * (p[0] - anchor[0])

    f0 = np.zeros(y.shape[0])
    _eval_field(exps, coeffs, y, f0)
    # crossing orientation at departure; zero when the start is not
    # transversal (then any strict crossing counts)
    g_orient = gfun(y + 1e-9 * f0) - gfun(y)
    if abs(g_orient) < 1e-15:
        g_orient = 0.0
    t = 0.0
    h = 1e-4
    g_prev = gfun(y)
    nsteps = 0
    while t < t_max:
        if nsteps > 500000:
            return STATUS_STEP_FAILURE, t, y
        ynew, err = _rk45_step(exps, coeffs, y, h, ks)
        enorm = _error_norm(err, y, ynew, rtol, atol)
        if enorm > 1.0:
            h *= max(0.1, 0.9 * enorm ** -0.2)
            if h < 1e-14:
                return STATUS_STEP_FAILURE, t, y
            continue
        fnew = ks[6].copy()
        tnew = t + h
        g_new = gfun(ynew)
        if tnew > min_time and g_prev * g_new < 0.0 \
                and (g_orient == 0.0 or (g_new - g_prev) * g_orient > 0):
            lo, hi = 0.0, 1.0
            glo = g_prev
            for _ in range(bisect_iters):
                mid = 0.5 * (lo + hi)
                ymid = _hermite(y, ks[0], ynew, fnew, h, mid)
                gm = gfun(ymid)
                if glo * gm <= 0.0:
                    hi = mid
                else:
                    lo, glo = mid, gm
            theta = 0.5 * (lo + hi)
            ycross = _hermite(y, ks[0], ynew, fnew, h, theta)
            s = np.dot(d, ycross - anchor)
            if s > 0.0:
                return STATUS_OK, t + theta * h, ycross
        t = tnew
        y = ynew
        g_prev = g_new
        nsteps += 1
        if np.dot(y, y) > bound * bound:
            return STATUS_NO_RETURN, t, y
        factor = 5.0 if enorm == 0.0 else min(5.0, 0.9 * enorm ** -0.2)
        h = min(h * factor, t_max - t) if t_max - t > 0 else h * factor
        if h <= 0:
            break
    return STATUS_NO_RETURN, t, y
