# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the training hot path.

Semantics are defined by the `_python` backend; this module must agree
with it to ~1e-12 (see tests/test_kernels.py and benchmarks/).
"""

from libc.math cimport exp, log1p, tanh as c_tanh

import numpy as np


cdef inline double _sig(double v) noexcept nogil:
    cdef double e
    if v >= 0.0:
        return 1.0 / (1.0 + exp(-v))
    e = exp(v)
    return e / (1.0 + e)


cdef inline double _sp(double v) noexcept nogil:
    if v > 0.0:
        return v + log1p(exp(-v))
    return log1p(exp(v))


cdef void _mm_add(const double[:, ::1] a, const double[:, ::1] b,
                  double[:, ::1] out) noexcept nogil:
    # out += a @ b
    cdef Py_ssize_t m = a.shape[0], p = a.shape[1], n = b.shape[1]
    cdef Py_ssize_t i, k, j
    cdef double aik
    for i in range(m):
        for k in range(p):
            aik = a[i, k]
            for j in range(n):
                out[i, j] += aik * b[k, j]


cdef void _mm_nt_add(const double[:, ::1] a, const double[:, ::1] b,
                     double[:, ::1] out) noexcept nogil:
    # out += a @ b.T
    cdef Py_ssize_t m = a.shape[0], p = a.shape[1], n = b.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double acc
    for i in range(m):
        for j in range(n):
            acc = 0.0
            for k in range(p):
                acc += a[i, k] * b[j, k]
            out[i, j] += acc


cdef void _mm_tn_add(const double[:, ::1] a, const double[:, ::1] b,
                     double[:, ::1] out) noexcept nogil:
    # out += a.T @ b
    cdef Py_ssize_t m = a.shape[0], p = a.shape[1], n = b.shape[1]
    cdef Py_ssize_t i, k, j
    cdef double aik
    for i in range(m):
        for k in range(p):
            aik = a[i, k]
            for j in range(n):
                out[k, j] += aik * b[i, j]


def affine_forward(double[:, ::1] x, double[:, ::1] w, double[::1] b):
    cdef Py_ssize_t m = x.shape[0], n = w.shape[1]
    cdef Py_ssize_t i, j
    out_arr = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    with nogil:
        for i in range(m):
            for j in range(n):
                out[i, j] = b[j]
        _mm_add(x, w, out)
    return out_arr


def affine_backward(double[:, ::1] x, double[:, ::1] w, double[:, ::1] gy):
    cdef Py_ssize_t m = x.shape[0], p = x.shape[1], n = w.shape[1]
    cdef Py_ssize_t i, j
    gx_arr = np.zeros((m, p), dtype=np.float64)
    gw_arr = np.zeros((p, n), dtype=np.float64)
    gb_arr = np.zeros(n, dtype=np.float64)
    cdef double[:, ::1] gx = gx_arr
    cdef double[:, ::1] gw = gw_arr
    cdef double[::1] gb = gb_arr
    with nogil:
        _mm_nt_add(gy, w, gx)
        _mm_tn_add(x, gy, gw)
        for i in range(m):
            for j in range(n):
                gb[j] += gy[i, j]
    return gx_arr, gw_arr, gb_arr


def relu_forward(object x):
    cdef double[::1] xv, ov
    cdef Py_ssize_t i, n
    xa = np.ascontiguousarray(x, dtype=np.float64)
    out_arr = np.empty_like(xa)
    xv = xa.ravel()
    ov = out_arr.ravel()
    n = xv.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = xv[i] if xv[i] > 0.0 else 0.0
    return out_arr


def relu_backward(object x, object gy):
    cdef double[::1] xv, gv, ov
    cdef Py_ssize_t i, n
    xa = np.ascontiguousarray(x, dtype=np.float64)
    ga = np.ascontiguousarray(gy, dtype=np.float64)
    out_arr = np.empty_like(xa)
    xv = xa.ravel()
    gv = ga.ravel()
    ov = out_arr.ravel()
    n = xv.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = gv[i] if xv[i] > 0.0 else 0.0
    return out_arr


def tanh_forward(object x):
    cdef double[::1] xv, ov
    cdef Py_ssize_t i, n
    xa = np.ascontiguousarray(x, dtype=np.float64)
    out_arr = np.empty_like(xa)
    xv = xa.ravel()
    ov = out_arr.ravel()
    n = xv.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = c_tanh(xv[i])
    return out_arr


def tanh_backward(object y, object gy):
    cdef double[::1] yv, gv, ov
    cdef Py_ssize_t i, n
    ya = np.ascontiguousarray(y, dtype=np.float64)
    ga = np.ascontiguousarray(gy, dtype=np.float64)
    out_arr = np.empty_like(ya)
    yv = ya.ravel()
    gv = ga.ravel()
    ov = out_arr.ravel()
    n = yv.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = gv[i] * (1.0 - yv[i] * yv[i])
    return out_arr


def sigmoid_forward(object x):
    cdef double[::1] xv, ov
    cdef Py_ssize_t i, n
    xa = np.ascontiguousarray(x, dtype=np.float64)
    out_arr = np.empty_like(xa)
    xv = xa.ravel()
    ov = out_arr.ravel()
    n = xv.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = _sig(xv[i])
    return out_arr


def sigmoid_backward(object y, object gy):
    cdef double[::1] yv, gv, ov
    cdef Py_ssize_t i, n
    ya = np.ascontiguousarray(y, dtype=np.float64)
    ga = np.ascontiguousarray(gy, dtype=np.float64)
    out_arr = np.empty_like(ya)
    yv = ya.ravel()
    gv = ga.ravel()
    ov = out_arr.ravel()
    n = yv.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = gv[i] * yv[i] * (1.0 - yv[i])
    return out_arr


def softplus_forward(object x):
    cdef double[::1] xv, ov
    cdef Py_ssize_t i, n
    xa = np.ascontiguousarray(x, dtype=np.float64)
    out_arr = np.empty_like(xa)
    xv = xa.ravel()
    ov = out_arr.ravel()
    n = xv.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = _sp(xv[i])
    return out_arr


def softplus_backward(object x, object gy):
    cdef double[::1] xv, gv, ov
    cdef Py_ssize_t i, n
    xa = np.ascontiguousarray(x, dtype=np.float64)
    ga = np.ascontiguousarray(gy, dtype=np.float64)
    out_arr = np.empty_like(xa)
    xv = xa.ravel()
    gv = ga.ravel()
    ov = out_arr.ravel()
    n = xv.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = gv[i] * _sig(xv[i])
    return out_arr


def gru_cell_forward(double[:, ::1] x, double[:, ::1] hp, double[::1] mask,
                     double[:, ::1] wz, double[:, ::1] uz, double[::1] bz,
                     double[:, ::1] wr, double[:, ::1] ur, double[::1] br,
                     double[:, ::1] wh, double[:, ::1] uh, double[::1] bh):
    cdef Py_ssize_t m = x.shape[0], dh = uz.shape[0]
    cdef Py_ssize_t i, j
    cdef double mi, hcell
    z_arr = np.empty((m, dh), dtype=np.float64)
    r_arr = np.empty((m, dh), dtype=np.float64)
    c_arr = np.empty((m, dh), dtype=np.float64)
    rhp_arr = np.empty((m, dh), dtype=np.float64)
    h_arr = np.empty((m, dh), dtype=np.float64)
    cdef double[:, ::1] z = z_arr, r = r_arr, c = c_arr, rhp = rhp_arr, h = h_arr
    with nogil:
        for i in range(m):
            for j in range(dh):
                z[i, j] = bz[j]
                r[i, j] = br[j]
        _mm_add(x, wz, z)
        _mm_add(hp, uz, z)
        _mm_add(x, wr, r)
        _mm_add(hp, ur, r)
        for i in range(m):
            for j in range(dh):
                z[i, j] = _sig(z[i, j])
                r[i, j] = _sig(r[i, j])
                rhp[i, j] = r[i, j] * hp[i, j]
                c[i, j] = bh[j]
        _mm_add(x, wh, c)
        _mm_add(rhp, uh, c)
        for i in range(m):
            mi = mask[i]
            for j in range(dh):
                c[i, j] = c_tanh(c[i, j])
                hcell = z[i, j] * hp[i, j] + (1.0 - z[i, j]) * c[i, j]
                h[i, j] = mi * hcell + (1.0 - mi) * hp[i, j]
    return h_arr, z_arr, r_arr, c_arr, rhp_arr


def gru_cell_backward(double[:, ::1] gh, double[:, ::1] x, double[:, ::1] hp,
                      double[::1] mask, double[:, ::1] z, double[:, ::1] r,
                      double[:, ::1] c, double[:, ::1] rhp,
                      double[:, ::1] wz, double[:, ::1] uz,
                      double[:, ::1] wr, double[:, ::1] ur,
                      double[:, ::1] wh, double[:, ::1] uh):
    cdef Py_ssize_t m = x.shape[0], de = x.shape[1], dh = uz.shape[0]
    cdef Py_ssize_t i, j
    cdef double mi, ghc
    gaz_arr = np.empty((m, dh), dtype=np.float64)
    gar_arr = np.empty((m, dh), dtype=np.float64)
    gah_arr = np.empty((m, dh), dtype=np.float64)
    grhp_arr = np.zeros((m, dh), dtype=np.float64)
    ghp_arr = np.empty((m, dh), dtype=np.float64)
    gx_arr = np.zeros((m, de), dtype=np.float64)
    gwz_arr = np.zeros((de, dh), dtype=np.float64)
    guz_arr = np.zeros((dh, dh), dtype=np.float64)
    gbz_arr = np.zeros(dh, dtype=np.float64)
    gwr_arr = np.zeros((de, dh), dtype=np.float64)
    gur_arr = np.zeros((dh, dh), dtype=np.float64)
    gbr_arr = np.zeros(dh, dtype=np.float64)
    gwh_arr = np.zeros((de, dh), dtype=np.float64)
    guh_arr = np.zeros((dh, dh), dtype=np.float64)
    gbh_arr = np.zeros(dh, dtype=np.float64)
    cdef double[:, ::1] gaz = gaz_arr, gar = gar_arr, gah = gah_arr
    cdef double[:, ::1] grhp = grhp_arr, ghp = ghp_arr, gx = gx_arr
    cdef double[:, ::1] gwz = gwz_arr, guz = guz_arr
    cdef double[:, ::1] gwr = gwr_arr, gur = gur_arr
    cdef double[:, ::1] gwh = gwh_arr, guh = guh_arr
    cdef double[::1] gbz = gbz_arr, gbr = gbr_arr, gbh = gbh_arr
    with nogil:
        # gah first: needs gc = gh*m*(1-z)
        for i in range(m):
            mi = mask[i]
            for j in range(dh):
                ghc = gh[i, j] * mi
                gah[i, j] = ghc * (1.0 - z[i, j]) * (1.0 - c[i, j] * c[i, j])
                gaz[i, j] = ghc * (hp[i, j] - c[i, j]) * z[i, j] * (1.0 - z[i, j])
                ghp[i, j] = gh[i, j] * (1.0 - mi) + ghc * z[i, j]
        _mm_nt_add(gah, uh, grhp)
        for i in range(m):
            for j in range(dh):
                ghp[i, j] += grhp[i, j] * r[i, j]
                gar[i, j] = grhp[i, j] * hp[i, j] * r[i, j] * (1.0 - r[i, j])
        _mm_nt_add(gaz, wz, gx)
        _mm_nt_add(gar, wr, gx)
        _mm_nt_add(gah, wh, gx)
        _mm_nt_add(gaz, uz, ghp)
        _mm_nt_add(gar, ur, ghp)
        _mm_tn_add(x, gaz, gwz)
        _mm_tn_add(hp, gaz, guz)
        _mm_tn_add(x, gar, gwr)
        _mm_tn_add(hp, gar, gur)
        _mm_tn_add(x, gah, gwh)
        _mm_tn_add(rhp, gah, guh)
        for i in range(m):
            for j in range(dh):
                gbz[j] += gaz[i, j]
                gbr[j] += gar[i, j]
                gbh[j] += gah[i, j]
    return (gx_arr, ghp_arr, gwz_arr, guz_arr, gbz_arr, gwr_arr, gur_arr,
            gbr_arr, gwh_arr, guh_arr, gbh_arr)
