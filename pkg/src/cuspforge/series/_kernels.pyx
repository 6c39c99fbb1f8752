# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled truncated series kernels (float64 only)."""
import numpy as np
from libc.math cimport sqrt


def mul2(const double[:, :] a, const double[:, :] b):
    cdef Py_ssize_t nu = min(a.shape[0], b.shape[0])
    cdef Py_ssize_t nv = min(a.shape[1], b.shape[1])
    out_arr = np.zeros((nu, nv), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, k, l
    cdef double aij
    for i in range(nu):
        for j in range(nv):
            aij = a[i, j]
            if aij == 0.0:
                continue
            for k in range(nu - i):
                for l in range(nv - j):
                    out[i + k, j + l] += aij * b[k, l]
    return out_arr


def div2(const double[:, :] a, const double[:, :] b):
    cdef Py_ssize_t nu = min(a.shape[0], b.shape[0])
    cdef Py_ssize_t nv = min(a.shape[1], b.shape[1])
    q_arr = np.zeros((nu, nv), dtype=np.float64)
    cdef double[:, ::1] q = q_arr
    cdef double b00 = b[0, 0]
    cdef double acc
    cdef Py_ssize_t i, j, k, l
    for i in range(nu):
        for j in range(nv):
            acc = a[i, j]
            for k in range(i + 1):
                for l in range(j + 1):
                    if k == 0 and l == 0:
                        continue
                    acc -= b[k, l] * q[i - k, j - l]
            q[i, j] = acc / b00
    return q_arr


def sqrt2(const double[:, :] a):
    cdef Py_ssize_t nu = a.shape[0]
    cdef Py_ssize_t nv = a.shape[1]
    s_arr = np.zeros((nu, nv), dtype=np.float64)
    cdef double[:, ::1] s = s_arr
    cdef double s00 = sqrt(a[0, 0])
    cdef double acc
    cdef Py_ssize_t i, j, k, l
    s[0, 0] = s00
    for i in range(nu):
        for j in range(nv):
            if i == 0 and j == 0:
                continue
            acc = a[i, j]
            for k in range(i + 1):
                for l in range(j + 1):
                    if (k == 0 and l == 0) or (k == i and l == j):
                        continue
                    acc -= s[k, l] * s[i - k, j - l]
            s[i, j] = acc / (2.0 * s00)
    return s_arr
