# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled integrator kernels.

Same contracts as the numpy reference in _ref.py. Within this backend a
zero-noise Euler-Maruyama run is bit-identical to the Euler run because the
per-step arithmetic is expressed in the same order and the noise update is
skipped when sigma is exactly zero. Across backends agreement is only up to
rounding (numpy reduces sums pairwise, these loops reduce sequentially).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin, isfinite

cnp.import_array()

BACKEND_NAME = "compiled"


def euler_trajectory(const double[::1] theta0 not None,
                     const double[::1] omega0 not None,
                     const double[::1] nu not None,
                     double kappa, double gamma, double dt, int steps):
    cdef Py_ssize_t n = theta0.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] thetas = np.empty((steps + 1, n))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] omegas = np.empty((steps + 1, n))
    cdef double[:, ::1] tv = thetas
    cdef double[:, ::1] ov = omegas
    cdef const double[::1] nuv = nu
    cdef double ic, tnew, onew
    cdef Py_ssize_t i, k
    cdef bint ok

    for i in range(n):
        tv[0, i] = theta0[i]
        ov[0, i] = omega0[i]
    for k in range(steps):
        ic = 0.0
        for i in range(n):
            ic += 1.0 + cos(tv[k, i])
        ic /= n
        ok = True
        for i in range(n):
            onew = ov[k, i] + dt * (nuv[i] - gamma * ov[k, i] - kappa * ic * sin(tv[k, i]))
            tnew = tv[k, i] + dt * ov[k, i]
            tv[k + 1, i] = tnew
            ov[k + 1, i] = onew
            if not (isfinite(tnew) and isfinite(onew)):
                ok = False
        if not ok:
            return thetas, omegas, k + 1
    return thetas, omegas, -1


def em_trajectory(const double[::1] theta0 not None,
                  const double[::1] omega0 not None,
                  const double[::1] nu not None,
                  double kappa, double gamma, double dt,
                  const double[::1] sigma_vals not None,
                  const double[::1] dB not None):
    cdef Py_ssize_t n = theta0.shape[0]
    cdef Py_ssize_t steps = dB.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] thetas = np.empty((steps + 1, n))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] omegas = np.empty((steps + 1, n))
    cdef double[:, ::1] tv = thetas
    cdef double[:, ::1] ov = omegas
    cdef const double[::1] nuv = nu
    cdef const double[::1] sigv = sigma_vals
    cdef const double[::1] dBv = dB
    cdef double ic, oc, sig, gain, tnew, onew
    cdef Py_ssize_t i, k
    cdef bint ok

    for i in range(n):
        tv[0, i] = theta0[i]
        ov[0, i] = omega0[i]
    for k in range(steps):
        ic = 0.0
        for i in range(n):
            ic += 1.0 + cos(tv[k, i])
        ic /= n
        sig = sigv[k]
        if sig != 0.0:
            oc = 0.0
            for i in range(n):
                oc += ov[k, i]
            oc /= n
            gain = sig * dBv[k]
        else:
            oc = 0.0
            gain = 0.0
        ok = True
        for i in range(n):
            onew = ov[k, i] + dt * (nuv[i] - gamma * ov[k, i] - kappa * ic * sin(tv[k, i]))
            if sig != 0.0:
                onew = onew + gain * (ov[k, i] - oc)
            tnew = tv[k, i] + dt * ov[k, i]
            tv[k + 1, i] = tnew
            ov[k + 1, i] = onew
            if not (isfinite(tnew) and isfinite(onew)):
                ok = False
        if not ok:
            return thetas, omegas, k + 1
    return thetas, omegas, -1


def em_scan(const double[::1] theta0 not None,
            const double[::1] omega0 not None,
            const double[::1] nu not None,
            double kappa, double gamma, double dt,
            const double[::1] sigma_vals not None,
            const double[::1] dB not None,
            double threshold):
    cdef Py_ssize_t n = theta0.shape[0]
    cdef Py_ssize_t steps = dB.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tarr = np.asarray(theta0).copy()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] oarr = np.asarray(omega0).copy()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] onew = np.empty(n)
    cdef double[::1] t = tarr
    cdef double[::1] o = oarr
    cdef double[::1] o2 = onew
    cdef const double[::1] nuv = nu
    cdef const double[::1] sigv = sigma_vals
    cdef const double[::1] dBv = dB
    cdef double ic, oc, sig, gain, d, tmax, tmin, sup, val
    cdef Py_ssize_t i, k
    cdef bint ok

    tmax = t[0]
    tmin = t[0]
    for i in range(1, n):
        if t[i] > tmax:
            tmax = t[i]
        if t[i] < tmin:
            tmin = t[i]
    d = tmax - tmin
    sup = d
    if d > threshold:
        return 0, sup, -1
    for k in range(steps):
        ic = 0.0
        for i in range(n):
            ic += 1.0 + cos(t[i])
        ic /= n
        sig = sigv[k]
        if sig != 0.0:
            oc = 0.0
            for i in range(n):
                oc += o[i]
            oc /= n
            gain = sig * dBv[k]
        else:
            oc = 0.0
            gain = 0.0
        ok = True
        for i in range(n):
            val = o[i] + dt * (nuv[i] - gamma * o[i] - kappa * ic * sin(t[i]))
            if sig != 0.0:
                val = val + gain * (o[i] - oc)
            o2[i] = val
            t[i] = t[i] + dt * o[i]
            if not (isfinite(t[i]) and isfinite(val)):
                ok = False
        for i in range(n):
            o[i] = o2[i]
        if not ok:
            return -1, sup, k + 1
        tmax = t[0]
        tmin = t[0]
        for i in range(1, n):
            if t[i] > tmax:
                tmax = t[i]
            if t[i] < tmin:
                tmin = t[i]
        d = tmax - tmin
        if d > sup:
            sup = d
        if d > threshold:
            return k + 1, sup, -1
    return -1, sup, -1
