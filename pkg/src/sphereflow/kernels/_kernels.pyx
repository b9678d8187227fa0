# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twin of `_py_kernels`: Dormand-Prince 5(4) propagation of
polynomial vector fields and anchored-ray section location.  The algorithms
and step-control constants match the pure-Python module exactly."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, fmin, fmax, pow, sqrt

cnp.import_array()

STATUS_OK = 0
STATUS_NO_RETURN = 1
STATUS_STEP_FAILURE = 2

cdef double[7] _Cc
cdef double[7][6] _Ac
cdef double[7] _B5c
cdef double[7] _Ec

_Ac[1][0] = 1.0 / 5.0
_Ac[2][0] = 3.0 / 40.0; _Ac[2][1] = 9.0 / 40.0
_Ac[3][0] = 44.0 / 45.0; _Ac[3][1] = -56.0 / 15.0; _Ac[3][2] = 32.0 / 9.0
_Ac[4][0] = 19372.0 / 6561.0; _Ac[4][1] = -25360.0 / 2187.0
_Ac[4][2] = 64448.0 / 6561.0; _Ac[4][3] = -212.0 / 729.0
_Ac[5][0] = 9017.0 / 3168.0; _Ac[5][1] = -355.0 / 33.0
_Ac[5][2] = 46732.0 / 5247.0; _Ac[5][3] = 49.0 / 176.0
_Ac[5][4] = -5103.0 / 18656.0

_B5c[0] = 35.0 / 384.0; _B5c[1] = 0.0; _B5c[2] = 500.0 / 1113.0
_B5c[3] = 125.0 / 192.0; _B5c[4] = -2187.0 / 6784.0; _B5c[5] = 11.0 / 84.0
_B5c[6] = 0.0

_Ec[0] = 35.0 / 384.0 - 5179.0 / 57600.0
_Ec[1] = 0.0
_Ec[2] = 500.0 / 1113.0 - 7571.0 / 16695.0
_Ec[3] = 125.0 / 192.0 - 393.0 / 640.0
_Ec[4] = -2187.0 / 6784.0 + 92097.0 / 339200.0
_Ec[5] = 11.0 / 84.0 - 187.0 / 2100.0
_Ec[6] = -1.0 / 40.0


cdef void _eval_field(long long[:, :, ::1] exps, double[:, ::1] coeffs,
                      double* y, double* out, int ncomp, int nterms,
                      int nvars) noexcept nogil:
    cdef int i, k, j, e, r
    cdef double total, term, c
    for i in range(ncomp):
        total = 0.0
        for k in range(nterms):
            c = coeffs[i, k]
            if c == 0.0:
                continue
            term = c
            for j in range(nvars):
                e = <int> exps[i, k, j]
                for r in range(e):
                    term *= y[j]
            total += term
        out[i] = total


cdef double _rk45_step(long long[:, :, ::1] exps, double[:, ::1] coeffs,
                       double* y, double h, double[7][8] ks, double* ynew,
                       double rtol, double atol, int n) noexcept nogil:
    """One attempted step; fills ks and ynew, returns the error norm."""
    cdef int s, m, j
    cdef double[8] ytmp
    cdef double acc, err_j, sc, esum
    _eval_field(exps, coeffs, y, ks[0], coeffs.shape[0], coeffs.shape[1],
                exps.shape[2])
    for s in range(1, 6):
        for j in range(n):
            acc = 0.0
            for m in range(s):
                acc += _Ac[s][m] * ks[m][j]
            ytmp[j] = y[j] + h * acc
        _eval_field(exps, coeffs, ytmp, ks[s], n, coeffs.shape[1],
                    exps.shape[2])
    for j in range(n):
        acc = 0.0
        for m in range(6):
            acc += _B5c[m] * ks[m][j]
        ynew[j] = y[j] + h * acc
    _eval_field(exps, coeffs, ynew, ks[6], n, coeffs.shape[1], exps.shape[2])
    esum = 0.0
    for j in range(n):
        acc = 0.0
        for m in range(7):
            acc += _Ec[m] * ks[m][j]
        err_j = h * acc
        sc = atol + rtol * fmax(fabs(y[j]), fabs(ynew[j]))
        esum += (err_j / sc) * (err_j / sc)
    return sqrt(esum / n)


def rk45_integrate(object exps_in, object coeffs_in, object x0, double t0,
                   double t1, double rtol, double atol, bint renorm,
                   long max_steps=200000):
    """Adaptive propagation from t0 to t1.

    Returns (status, ts, ys, nsteps, nrejected)."""
    cdef long long[:, :, ::1] exps = np.ascontiguousarray(exps_in,
                                                          dtype=np.int64)
    cdef double[:, ::1] coeffs = np.ascontiguousarray(coeffs_in,
                                                      dtype=np.float64)
    y_arr = np.array(x0, dtype=np.float64)
    cdef double[::1] yv = y_arr
    cdef int n = yv.shape[0]
    cdef int ncomp = coeffs.shape[0]
    cdef double[8] y
    cdef double[8] ynew
    cdef double[7][8] ks
    cdef int j
    for j in range(n):
        y[j] = yv[j]
    cdef double direction = 1.0 if t1 >= t0 else -1.0
    cdef double t = t0
    cdef double h, enorm, nrm, factor
    cdef long nsteps = 0, nrej = 0
    h = direction * fmin(1e-3, fabs(t1 - t0) if t1 != t0 else 1e-3)
    ts = [t0]
    ys = [tuple(y[j] for j in range(n))]
    cdef int status = STATUS_OK
    while direction * (t1 - t) > 1e-15:
        if nsteps + nrej > max_steps:
            status = STATUS_STEP_FAILURE
            break
        if direction * (t + h - t1) > 0:
            h = t1 - t
        enorm = _rk45_step(exps, coeffs, y, h, ks, ynew, rtol, atol, n)
        if enorm <= 1.0:
            t += h
            for j in range(n):
                y[j] = ynew[j]
            if renorm:
                nrm = 0.0
                for j in range(n):
                    nrm += y[j] * y[j]
                nrm = sqrt(nrm)
                for j in range(n):
                    y[j] /= nrm
            ts.append(t)
            ys.append(tuple(y[j] for j in range(n)))
            nsteps += 1
            factor = 5.0 if enorm == 0.0 else fmin(5.0, 0.9 * pow(enorm, -0.2))
            h *= factor
        else:
            nrej += 1
            h *= fmax(0.1, 0.9 * pow(enorm, -0.2))
            if fabs(h) < 1e-14:
                status = STATUS_STEP_FAILURE
                break
    return status, np.array(ts), np.array(ys), nsteps, nrej


cdef void _hermite(double* y0, double* f0, double* y1, double* f1, double h,
                   double theta, double* out, int n) noexcept nogil:
    cdef double t2 = theta * theta
    cdef double t3 = t2 * theta
    cdef double h00 = 2 * t3 - 3 * t2 + 1
    cdef double h10 = t3 - 2 * t2 + theta
    cdef double h01 = -2 * t3 + 3 * t2
    cdef double h11 = t3 - t2
    cdef int j
    for j in range(n):
        out[j] = h00 * y0[j] + h10 * h * f0[j] + h01 * y1[j] + h11 * h * f1[j]


def rk45_to_section(object exps_in, object coeffs_in, object x0,
                    object anchor_in, object direction_in, double t_max,
                    double rtol, double atol, double bound=1e3,
                    double min_time=1e-8, int bisect_iters=80):
    """Integrate forward until the orbit crosses the ray
    anchor + s*direction (s > 0) in the departure orientation.

    Returns (status, t_cross, y_cross)."""
    cdef long long[:, :, ::1] exps = np.ascontiguousarray(exps_in,
                                                          dtype=np.int64)
    cdef double[:, ::1] coeffs = np.ascontiguousarray(coeffs_in,
                                                      dtype=np.float64)
    y_arr = np.array(x0, dtype=np.float64)
    cdef double[::1] yv = y_arr
    cdef int n = yv.shape[0]
    a_arr = np.asarray(anchor_in, dtype=np.float64)
    d_arr = np.asarray(direction_in, dtype=np.float64)
    d_arr = d_arr / np.sqrt(np.dot(d_arr, d_arr))
    cdef double ax = a_arr[0], ay = a_arr[1]
    cdef double dx = d_arr[0], dy = d_arr[1]
    cdef double[8] y
    cdef double[8] ynew
    cdef double[8] ymid
    cdef double[8] f0
    cdef double[7][8] ks
    cdef int j
    for j in range(n):
        y[j] = yv[j]

    cdef double g_prev = dx * (y[1] - ay) - dy * (y[0] - ax)
    _eval_field(exps, coeffs, y, f0, coeffs.shape[0], coeffs.shape[1],
                exps.shape[2])
    cdef double g_orient = 1e-9 * (dx * f0[1] - dy * f0[0])
    if fabs(g_orient) < 1e-15:
        g_orient = 0.0
    cdef double t = 0.0, h = 1e-4
    cdef long nsteps = 0
    cdef double enorm, g_new, tnew, lo, hi, glo, mid, gm, theta, s, r2
    while t < t_max:
        if nsteps > 500000:
            return STATUS_STEP_FAILURE, t, tuple(y[j] for j in range(n))
        enorm = _rk45_step(exps, coeffs, y, h, ks, ynew, rtol, atol, n)
        if enorm > 1.0:
            h *= fmax(0.1, 0.9 * pow(enorm, -0.2))
            if h < 1e-14:
                return STATUS_STEP_FAILURE, t, tuple(y[j] for j in range(n))
            continue
        tnew = t + h
        g_new = dx * (ynew[1] - ay) - dy * (ynew[0] - ax)
        if tnew > min_time and g_prev * g_new < 0.0 and \
                (g_orient == 0.0 or (g_new - g_prev) * g_orient > 0):
            lo = 0.0
            hi = 1.0
            glo = g_prev
            for j in range(bisect_iters):
                mid = 0.5 * (lo + hi)
                _hermite(y, ks[0], ynew, ks[6], h, mid, ymid, n)
                gm = dx * (ymid[1] - ay) - dy * (ymid[0] - ax)
                if glo * gm <= 0.0:
                    hi = mid
                else:
                    lo = mid
                    glo = gm
            theta = 0.5 * (lo + hi)
            _hermite(y, ks[0], ynew, ks[6], h, theta, ymid, n)
            s = dx * (ymid[0] - ax) + dy * (ymid[1] - ay)
            if s > 0.0:
                return STATUS_OK, t + theta * h, \
                    tuple(ymid[j] for j in range(n))
        t = tnew
        for j in range(n):
            y[j] = ynew[j]
        g_prev = g_new
        nsteps += 1
        r2 = 0.0
        for j in range(n):
            r2 += y[j] * y[j]
        if r2 > bound * bound:
            return STATUS_NO_RETURN, t, tuple(y[j] for j in range(n))
        enorm = 5.0 if enorm == 0.0 else fmin(5.0, 0.9 * pow(enorm, -0.2))
        h = fmin(h * enorm, t_max - t) if t_max - t > 0 else h * enorm
        if h <= 0:
            break
    return STATUS_NO_RETURN, t, tuple(y[j] for j in range(n))
