# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled kernels for the hot loops: the Kaczmarz sweep and batch evaluation.

Index arithmetic mirrors dyadic.locate exactly: the finest-scale integer
coordinates floor(x*2^m) and floor(y*2^m) are exact in double precision, and
every coarser index is a right shift of them.
"""

from libc.math cimport sqrt

import numpy as np

cdef double INV_SQRT2 = sqrt(0.5)
cdef int MAX_LEVEL = 26


def backend_name():
    return "compiled"


cdef inline double _dist_sq(double[::1] a, double[::1] b) nogil:
    cdef Py_ssize_t j
    cdef double s = 0.0
    cdef double d
    for j in range(a.shape[0]):
        d = a[j] - b[j]
        s += d * d
    return s


def kaczmarz_sweep(double[::1] v, double[::1] xs, double[::1] ys,
                   double[::1] targets, int m, double[::1] w_ref=None):
    """Project v onto each sample's hyperplane in order, updating in place.

    Returns the squared distances to w_ref after every step (length l+1,
    starting at step 0) when w_ref is given, else None.
    """
    cdef Py_ssize_t l = xs.shape[0]
    cdef long n, half, xi, yi, j
    cdef long idx[27]     # MAX_LEVEL + 1
    cdef double coef[27]
    cdef double acc, step, inv_norm_sq
    cdef Py_ssize_t i
    cdef int k
    cdef bint want_trace = w_ref is not None
    cdef double[::1] trace_view

    if m < 1 or m > MAX_LEVEL:
        raise ValueError(f"level m must be in 1..{MAX_LEVEL}, got {m}")
    if v.shape[0] != ((m + 2) << (m - 1)):
        raise ValueError("coefficient vector length does not match level")
    if ys.shape[0] != l or targets.shape[0] != l:
        raise ValueError("xs, ys, targets must have equal length")

    trace = None
    if want_trace:
        if w_ref.shape[0] != v.shape[0]:
            raise ValueError("reference vector length mismatch")
        trace = np.empty(l + 1, dtype=np.float64)
        trace_view = trace
    else:
        trace_view = v  # placeholder, never written

    n = 1 << m
    half = n >> 1
    inv_norm_sq = 1.0 / (1.0 + 0.5 * m)

    with nogil:
        if want_trace:
            trace_view[0] = _dist_sq(v, w_ref)
        for i in range(l):
            xi = <long>(xs[i] * n)
            yi = <long>(ys[i] * n)
            idx[0] = yi
            coef[0] = 1.0
            acc = v[yi]
            for k in range(1, m + 1):
                j = n + (k - 1) * half + ((yi >> k) << (k - 1)) + (xi >> (m - k + 1))
                idx[k] = j
                if ((xi >> (m - k)) & 1) == 0:
                    coef[k] = INV_SQRT2
                else:
                    coef[k] = -INV_SQRT2
                acc += coef[k] * v[j]
            step = (targets[i] - acc) * inv_norm_sq
            for k in range(m + 1):
                v[idx[k]] += step * coef[k]
            if want_trace:
                trace_view[i + 1] = _dist_sq(v, w_ref)
    return trace


def evaluate_many(double[::1] v, double[::1] xs, double[::1] ys, int m,
                  double offset=0.0):
    """Embedding inner products of each point against v, plus offset."""
    cdef Py_ssize_t npts = xs.shape[0]
    cdef long n, half, xi, yi, j
    cdef double acc
    cdef Py_ssize_t i
    cdef int k

    if m < 1 or m > MAX_LEVEL:
        raise ValueError(f"level m must be in 1..{MAX_LEVEL}, got {m}")
    if v.shape[0] != ((m + 2) << (m - 1)):
        raise ValueError("coefficient vector length does not match level")
    if ys.shape[0] != npts:
        raise ValueError("xs and ys must have equal length")

    out = np.empty(npts, dtype=np.float64)
    cdef double[::1] out_view = out
    n = 1 << m
    half = n >> 1
    with nogil:
        for i in range(npts):
            xi = <long>(xs[i] * n)
            yi = <long>(ys[i] * n)
            acc = v[yi]
            for k in range(1, m + 1):
                j = n + (k - 1) * half + ((yi >> k) << (k - 1)) + (xi >> (m - k + 1))
                if ((xi >> (m - k)) & 1) == 0:
                    acc += INV_SQRT2 * v[j]
                else:
                    acc -= INV_SQRT2 * v[j]
            out_view[i] = acc + offset
    return out
