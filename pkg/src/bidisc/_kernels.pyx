# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: batched bivariate Horner evaluation and box-hit tests.

Same multiply-add order per sample as the pure-python backend; agreement is
to floating-point roundoff (numpy's SIMD fuses multiply-adds), and each
backend is bit-deterministic on its own.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


cdef inline double complex _horner2(const double complex[:, :] c, Py_ssize_t n1,
                                    Py_ssize_t m1, double complex z1,
                                    double complex z2) noexcept nogil:
    cdef double complex acc = 0
    cdef double complex row
    cdef Py_ssize_t j, k
    for j in range(n1 - 1, -1, -1):
        row = c[j, m1 - 1]
        for k in range(m1 - 2, -1, -1):
            row = row * z2 + c[j, k]
        acc = acc * z1 + row
    return acc


def eval_poly2(coeffs, z1, z2):
    """coeffs[j, k] multiplies z1**j * z2**k; vectorized over samples."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a = np.ascontiguousarray(np.atleast_1d(z1), dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] b = np.ascontiguousarray(np.atleast_1d(z2), dtype=np.complex128)
    cdef Py_ssize_t n = a.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(n, dtype=np.complex128)
    cdef Py_ssize_t n1 = c.shape[0], m1 = c.shape[1]
    cdef const double complex[:, :] cv = c
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = _horner2(cv, n1, m1, a[i], b[i])
    if np.ndim(z1) == 0 and np.ndim(z2) == 0:
        return out[0]
    return out


def eval_rational2(num, den, z1, z2):
    return eval_poly2(num, z1, z2) / eval_poly2(den, z1, z2)


def box_hits(num1, den1, num2, den2, z1, z2, double complex c1, double complex c2,
             double d1, double d2):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] p1 = np.ascontiguousarray(num1, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] q1 = np.ascontiguousarray(den1, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] p2 = np.ascontiguousarray(num2, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] q2 = np.ascontiguousarray(den2, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a = np.ascontiguousarray(z1, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] b = np.ascontiguousarray(z2, dtype=np.complex128)
    cdef Py_ssize_t n = a.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] mask = np.zeros(n, dtype=np.uint8)
    cdef const double complex[:, :] p1v = p1, q1v = q1, p2v = p2, q2v = q2
    cdef Py_ssize_t i
    cdef Py_ssize_t count = 0
    cdef double complex w1, w2
    with nogil:
        for i in range(n):
            w1 = _horner2(p1v, p1v.shape[0], p1v.shape[1], a[i], b[i]) / \
                 _horner2(q1v, q1v.shape[0], q1v.shape[1], a[i], b[i])
            if abs(w1 - c1) < d1:
                w2 = _horner2(p2v, p2v.shape[0], p2v.shape[1], a[i], b[i]) / \
                     _horner2(q2v, q2v.shape[0], q2v.shape[1], a[i], b[i])
                if abs(w2 - c2) < d2:
                    mask[i] = 1
                    count += 1
    return count, mask.view(np.bool_)
