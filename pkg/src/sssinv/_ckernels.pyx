# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementations of the two hot kernels (see _kernels_py for the
reference semantics): per-pixel local weighted linear fits on an angle grid,
and one epoch of mini-batch momentum SGD for the 1-hidden-layer net."""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, fabs, tanh
from libc.stdlib cimport free, malloc

cnp.import_array()

FLAG_EXPANDED = 1
FLAG_DEGRADED = 2
FLAG_FALLBACK = 4

BW_MARGIN = 1.05

cdef double _BW_MARGIN = 1.05
cdef double _RANK_EPS = 1e-12


cdef void _insertion_sort(double* a, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double v
    for i in range(1, n):
        v = a[i]
        j = i - 1
        while j >= 0 and a[j] > v:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = v


def loclin_grid(double[::1] angles, double[::1] tbs, double[::1] grid,
                double base_bw, double max_bw, int min_points,
                int kernel_id, int order):
    cdef Py_ssize_t m = angles.shape[0]
    cdef Py_ssize_t nk = grid.shape[0]
    est_arr = np.empty(nk, dtype=np.float64)
    flags_arr = np.zeros(nk, dtype=np.uint8)
    cdef double[::1] est = est_arr
    cdef unsigned char[::1] flags = flags_arr
    cdef double* d = <double*> malloc(m * sizeof(double))
    cdef double* ds = <double*> malloc(m * sizeof(double))
    if d == NULL or ds == NULL:
        free(d)
        free(ds)
        raise MemoryError()
    cdef Py_ssize_t k, i, imin
    cdef int n_in
    cdef double target, bw, u, wgt, y
    cdef double s0, s1, s2, t0, t1, den, dmin
    try:
        for k in range(nk):
            target = grid[k]
            for i in range(m):
                d[i] = fabs(angles[i] - target)
                ds[i] = d[i]
            _insertion_sort(ds, m)
            if m >= min_points:
                bw = _BW_MARGIN * ds[min_points - 1]
                if bw < base_bw:
                    bw = base_bw
            else:
                bw = max_bw
            if bw > max_bw:
                bw = max_bw
            if bw > base_bw:
                flags[k] |= 1  # FLAG_EXPANDED
            n_in = 0
            for i in range(m):
                if d[i] < bw:
                    n_in += 1
            if n_in < min_points:
                flags[k] |= 2  # FLAG_DEGRADED
            if n_in == 0:
                imin = 0
                dmin = d[0]
                for i in range(1, m):
                    if d[i] < dmin:
                        dmin = d[i]
                        imin = i
                est[k] = tbs[imin]
                flags[k] |= 4  # FLAG_FALLBACK
                continue
            s0 = s1 = s2 = t0 = t1 = 0.0
            for i in range(m):
                if d[i] >= bw:
                    continue
                u = angles[i] - target
                if kernel_id == 1:
                    wgt = exp(-4.5 * (u / bw) * (u / bw))
                else:
                    wgt = 1.0 - (u / bw) * (u / bw)
                y = tbs[i]
                s0 += wgt
                s1 += wgt * u
                s2 += wgt * u * u
                t0 += wgt * y
                t1 += wgt * u * y
            if order == 0:
                est[k] = t0 / s0
                continue
            den = s0 * s2 - s1 * s1
            if den <= _RANK_EPS * max(s0 * s2, 1e-300):
                est[k] = t0 / s0
                flags[k] |= 4  # FLAG_FALLBACK
            else:
                est[k] = (s2 * t0 - s1 * t1) / den
    finally:
        free(d)
        free(ds)
    return est_arr, flags_arr


def sgd_epoch(double[:, ::1] x, double[::1] y, double[::1] w, cnp.int64_t[::1] order,
              int batch_size, double lr, double momentum,
              double[:, ::1] w1, double[::1] b1, double[::1] w2, double[::1] b2,
              double[:, ::1] vw1, double[::1] vb1, double[::1] vw2, double[::1] vb2):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t p = x.shape[1]
    cdef Py_ssize_t h = w1.shape[0]
    hid_arr = np.empty(h, dtype=np.float64)
    gw1_arr = np.zeros((h, p), dtype=np.float64)
    gb1_arr = np.zeros(h, dtype=np.float64)
    gw2_arr = np.zeros(h, dtype=np.float64)
    cdef double[::1] hid = hid_arr
    cdef double[:, ::1] gw1 = gw1_arr
    cdef double[::1] gb1 = gb1_arr
    cdef double[::1] gw2 = gw2_arr
    cdef double total_err = 0.0, total_w = 0.0
    cdef double wsum, z, yhat, e, g, gz, gb2
    cdef Py_ssize_t start, stop, i, j, q, idx
    with nogil:
        start = 0
        while start < n:
            stop = start + batch_size
            if stop > n:
                stop = n
            wsum = 0.0
            for i in range(start, stop):
                wsum += w[order[i]]
            gb2 = 0.0
            for j in range(h):
                gb1[j] = 0.0
                gw2[j] = 0.0
                for q in range(p):
                    gw1[j, q] = 0.0
            for i in range(start, stop):
                idx = order[i]
                yhat = b2[0]
                for j in range(h):
                    z = b1[j]
                    for q in range(p):
                        z += w1[j, q] * x[idx, q]
                    hid[j] = tanh(z)
                    yhat += w2[j] * hid[j]
                e = yhat - y[idx]
                total_err += w[idx] * e * e
                g = 2.0 * w[idx] * e / wsum
                gb2 += g
                for j in range(h):
                    gw2[j] += g * hid[j]
                    gz = g * w2[j] * (1.0 - hid[j] * hid[j])
                    gb1[j] += gz
                    for q in range(p):
                        gw1[j, q] += gz * x[idx, q]
            for j in range(h):
                for q in range(p):
                    vw1[j, q] = momentum * vw1[j, q] - lr * gw1[j, q]
                    w1[j, q] += vw1[j, q]
                vb1[j] = momentum * vb1[j] - lr * gb1[j]
                b1[j] += vb1[j]
                vw2[j] = momentum * vw2[j] - lr * gw2[j]
                w2[j] += vw2[j]
            vb2[0] = momentum * vb2[0] - lr * gb2
            b2[0] += vb2[0]
            total_w += wsum
            start = stop
    return total_err / total_w
