# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot kernels.

Mirrors ``_fallback.py`` operation for operation; the build flags disable FMA
contraction so both lanes round identically wherever libm and the numpy ufuncs
agree.
"""

from libc.math cimport asin, cos, cosh, fabs, fmod, ldexp, sin, sqrt, tanh

import numpy as np

cdef double PI = 3.14159265358979323846264338328
cdef double TWO_PI = 6.283185307179586476925286766559
cdef double MODULUS_CAP = 1.0 - 1e-12
cdef int LANDEN_STEPS = 16
cdef double AGM_TOL = 4e-16
cdef int AGM_MAX_ITER = 60


def map_trajectories(theta0, p0, double kick, double period, Py_ssize_t n_steps,
                     bint wrap):
    """Iterate the kicked map; see the fallback lane for the full contract."""
    theta_arr = np.array(theta0, dtype=np.float64)
    p_arr = np.array(p0, dtype=np.float64)
    cdef Py_ssize_t n = theta_arr.shape[0]
    thetas_out = np.empty((n_steps + 1, n), dtype=np.float64)
    ps_out = np.empty((n_steps + 1, n), dtype=np.float64)
    cdef double[:, ::1] thetas = thetas_out
    cdef double[:, ::1] ps = ps_out
    cdef double[::1] th0 = theta_arr
    cdef double[::1] pp0 = p_arr
    cdef Py_ssize_t i, step
    cdef double th, p

    for i in range(n):
        thetas[0, i] = th0[i]
        ps[0, i] = pp0[i]
    for i in range(n):
        th = th0[i]
        p = pp0[i]
        for step in range(1, n_steps + 1):
            th = th + p * period
            if wrap:
                th = fmod(th, TWO_PI)
                if th < 0.0:
                    th += TWO_PI
            p = p + kick * sin(th)
            thetas[step, i] = th
            ps[step, i] = p
    return thetas_out, ps_out


cdef double _complete_k(double k) noexcept nogil:
    cdef double a = 1.0
    cdef double b = sqrt((1.0 - fabs(k)) * (1.0 + fabs(k)))
    cdef double an
    cdef int it
    for it in range(AGM_MAX_ITER):
        if fabs(a - b) <= AGM_TOL * a:
            break
        an = 0.5 * (a + b)
        b = sqrt(a * b)
        a = an
    return PI / (a + b)


def complete_k_batch(k):
    k_arr = np.ascontiguousarray(k, dtype=np.float64)
    out = np.empty(k_arr.shape[0], dtype=np.float64)
    cdef double[::1] kv = k_arr
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    for i in range(kv.shape[0]):
        ov[i] = _complete_k(kv[i])
    return out


def complete_k_point(double k):
    return _complete_k(k)


cdef void _jacobi(double u, double k, double *sn, double *cn, double *dn) noexcept nogil:
    cdef double kk = fabs(k)
    cdef double sech
    if kk == 1.0:
        sech = 1.0 / cosh(u)
        sn[0] = tanh(u)
        cn[0] = sech
        dn[0] = sech
        return
    if kk > MODULUS_CAP:
        kk = MODULUS_CAP

    cdef double ratios[16]
    cdef double complement = (1.0 - kk) * (1.0 + kk)
    cdef double a = 1.0
    cdef double b = sqrt(complement)
    cdef double an, bn, cn_step
    cdef int step
    for step in range(LANDEN_STEPS):
        an = 0.5 * (a + b)
        bn = sqrt(a * b)
        cn_step = 0.5 * (a - b)
        a = an
        b = bn
        ratios[step] = cn_step / a

    cdef double phi = ldexp(a * u, LANDEN_STEPS)
    cdef double arg
    for step in range(LANDEN_STEPS - 1, -1, -1):
        arg = ratios[step] * sin(phi)
        if arg > 1.0:
            arg = 1.0
        elif arg < -1.0:
            arg = -1.0
        phi = 0.5 * (phi + asin(arg))

    sn[0] = sin(phi)
    cn[0] = cos(phi)
    # dn through the complementary channel: cn² + (1-k²)·sn² has no
    # cancellation anywhere, unlike the textbook cn / cos(φ₁-φ₀) form whose
    # numerator and denominator vanish together at the quarter periods
    dn[0] = sqrt(cn[0] * cn[0] + complement * sn[0] * sn[0])


def jacobi_batch(u, k):
    u_arr, k_arr = np.broadcast_arrays(np.asarray(u, dtype=np.float64),
                                       np.asarray(k, dtype=np.float64))
    u_flat = np.ascontiguousarray(u_arr).ravel()
    k_flat = np.ascontiguousarray(k_arr).ravel()
    sn_out = np.empty(u_flat.shape[0], dtype=np.float64)
    cn_out = np.empty_like(sn_out)
    dn_out = np.empty_like(sn_out)
    cdef double[::1] uv = u_flat
    cdef double[::1] kv = k_flat
    cdef double[::1] sv = sn_out
    cdef double[::1] cv = cn_out
    cdef double[::1] dv = dn_out
    cdef Py_ssize_t i
    cdef double sn, cn, dn
    for i in range(uv.shape[0]):
        _jacobi(uv[i], kv[i], &sn, &cn, &dn)
        sv[i] = sn
        cv[i] = cn
        dv[i] = dn
    shape = u_arr.shape
    return sn_out.reshape(shape), cn_out.reshape(shape), dn_out.reshape(shape)


def jacobi_point(double u, double k):
    cdef double sn, cn, dn
    _jacobi(u, k, &sn, &cn, &dn)
    return sn, cn, dn
