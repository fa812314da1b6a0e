# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels for the binomially weighted block sums.

Same contract and the same pairwise reduction tree as
``rabicav.kernels.reference``; see that module for the formulas.
"""

import numpy as np

from libc.math cimport exp, cos


cdef inline double _tree_reduce(double* buf, Py_ssize_t m) nogil:
    # Pairwise reduction: pairs (0,1), (2,3), ... with the odd tail carried.
    cdef Py_ssize_t k, i
    if m == 0:
        return 0.0
    while m > 1:
        k = m // 2
        for i in range(k):
            buf[i] = buf[2 * i] + buf[2 * i + 1]
        if m % 2:
            buf[k] = buf[m - 1]
            m = k + 1
        else:
            m = k
    return buf[0]


def pairwise_sum(values):
    """Sum a 1-D array with the fixed pairwise tree used by all kernels."""
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("pairwise_sum expects a 1-D array")
    cdef double[::1] v = arr
    scratch = arr.copy()
    cdef double[::1] s = scratch
    cdef Py_ssize_t n = v.shape[0]
    if n == 0:
        return 0.0
    return _tree_reduce(&s[0], n)


def pg_block_sum(weights, c1, c2, a1, a2, a3, phi, times):
    """Weighted sum of damped-cosine probability responses."""
    w_arr = np.ascontiguousarray(weights, dtype=np.float64)
    c1_arr = np.ascontiguousarray(c1, dtype=np.float64)
    c2_arr = np.ascontiguousarray(c2, dtype=np.float64)
    a1_arr = np.ascontiguousarray(a1, dtype=np.float64)
    a2_arr = np.ascontiguousarray(a2, dtype=np.float64)
    a3_arr = np.ascontiguousarray(a3, dtype=np.float64)
    phi_arr = np.ascontiguousarray(phi, dtype=np.float64)
    t_arr = np.ascontiguousarray(times, dtype=np.float64)
    out_arr = np.empty_like(t_arr)
    if w_arr.size == 0:
        out_arr[:] = 0.0
        return out_arr
    scratch = np.empty_like(w_arr)

    cdef double[::1] w = w_arr, x1 = c1_arr, x2 = c2_arr
    cdef double[::1] e1 = a1_arr, e2 = a2_arr, e3 = a3_arr, f = phi_arr
    cdef double[::1] t = t_arr, out = out_arr, sc = scratch
    cdef Py_ssize_t ns = w.shape[0], nt = t.shape[0]
    cdef Py_ssize_t i, j
    cdef double tj

    with nogil:
        for j in range(nt):
            tj = t[j]
            for i in range(ns):
                sc[i] = w[i] * (
                    1.0
                    - 0.25 * x2[i] * exp(-e2[i] * tj)
                    - 0.25 * x1[i] * exp(-e1[i] * tj)
                    - 0.5 * exp(-e3[i] * tj) * cos(f[i] * tj)
                )
            out[j] = _tree_reduce(&sc[0], ns)
    return out_arr


def energy_block_sum(weights, k0, k1, k2, k3, a1, a2, times):
    """Weighted sum of two-exponential energy responses."""
    w_arr = np.ascontiguousarray(weights, dtype=np.float64)
    k0_arr = np.ascontiguousarray(k0, dtype=np.float64)
    k1_arr = np.ascontiguousarray(k1, dtype=np.float64)
    k2_arr = np.ascontiguousarray(k2, dtype=np.float64)
    k3_arr = np.ascontiguousarray(k3, dtype=np.float64)
    a1_arr = np.ascontiguousarray(a1, dtype=np.float64)
    a2_arr = np.ascontiguousarray(a2, dtype=np.float64)
    t_arr = np.ascontiguousarray(times, dtype=np.float64)
    out_arr = np.empty_like(t_arr)
    if w_arr.size == 0:
        out_arr[:] = 0.0
        return out_arr
    scratch = np.empty_like(w_arr)

    cdef double[::1] w = w_arr, q0 = k0_arr, q1 = k1_arr, q2 = k2_arr, q3 = k3_arr
    cdef double[::1] e1 = a1_arr, e2 = a2_arr
    cdef double[::1] t = t_arr, out = out_arr, sc = scratch
    cdef Py_ssize_t ns = w.shape[0], nt = t.shape[0]
    cdef Py_ssize_t i, j
    cdef double tj

    with nogil:
        for j in range(nt):
            tj = t[j]
            for i in range(ns):
                sc[i] = w[i] * (
                    q0[i]
                    + q1[i] * exp(-e1[i] * tj)
                    + (q2[i] + q3[i] * tj) * exp(-e2[i] * tj)
                )
            out[j] = _tree_reduce(&sc[0], ns)
    return out_arr
