# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: dense partial trace and pure-state reduction.

Semantics match qdel._kernels_py exactly; that module is the fallback when
this extension is not built.  The reduction kernel works on real/imaginary
pairs with the two-branch case unrolled, which the C compiler vectorizes
far better than complex-typed loops or BLAS rank-2 updates.
"""

import numpy as np

cimport numpy as cnp


def partial_trace_dense(const double complex[:, ::1] rho, Py_ssize_t left,
                        Py_ssize_t mid, Py_ssize_t right):
    """Trace out the middle tensor slot of a dense (left*mid*right)^2 matrix."""
    cdef Py_ssize_t d = left * right
    out_arr = np.zeros((d, d), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t a, b, c, a2, c2
    cdef Py_ssize_t base_in
    cdef const double complex* src
    cdef double complex* dst
    for a in range(left):
        for c in range(right):
            dst = &out[a * right + c, 0]
            for b in range(mid):
                src = &rho[(a * mid + b) * right + c, 0]
                for a2 in range(left):
                    base_in = (a2 * mid + b) * right
                    for c2 in range(right):
                        dst[a2 * right + c2] = dst[a2 * right + c2] + src[base_in + c2]
    return out_arr


def branch_outer_sum(const double complex[:, ::1] branches):
    """Sum of outer products sum_b v_b v_b^dagger for rows v_b of ``branches``."""
    cdef Py_ssize_t nb = branches.shape[0]
    cdef Py_ssize_t d = branches.shape[1]
    out_arr = np.empty((d, d), dtype=np.complex128)
    cdef double complex[:, ::1] out_view = out_arr
    # interleaved (re, im) views for vectorizable scalar arithmetic
    cdef const double* v = <const double*> &branches[0, 0]
    cdef double* o = <double*> &out_view[0, 0]
    cdef Py_ssize_t b, j, k
    cdef double x0r, x0i, x1r, x1i, yr, yi, y1r, y1i
    cdef const double* row0
    cdef const double* row1
    cdef double* dst
    cdef double acc_r, acc_i
    if nb == 2:
        row0 = v
        row1 = v + 2 * d
        for j in range(d):
            x0r = row0[2 * j]
            x0i = row0[2 * j + 1]
            x1r = row1[2 * j]
            x1i = row1[2 * j + 1]
            dst = o + 2 * j * d
            for k in range(d):
                yr = row0[2 * k]
                yi = row0[2 * k + 1]
                y1r = row1[2 * k]
                y1i = row1[2 * k + 1]
                # x * conj(y), summed over both branches
                dst[2 * k] = x0r * yr + x0i * yi + x1r * y1r + x1i * y1i
                dst[2 * k + 1] = x0i * yr - x0r * yi + x1i * y1r - x1r * y1i
    else:
        for j in range(d):
            dst = o + 2 * j * d
            for k in range(d):
                acc_r = 0
                acc_i = 0
                for b in range(nb):
                    x0r = v[2 * (b * d + j)]
                    x0i = v[2 * (b * d + j) + 1]
                    yr = v[2 * (b * d + k)]
                    yi = v[2 * (b * d + k) + 1]
                    acc_r += x0r * yr + x0i * yi
                    acc_i += x0i * yr - x0r * yi
                dst[2 * k] = acc_r
                dst[2 * k + 1] = acc_i
    return out_arr
