# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernel-assembly loops (same signatures as ``_pykernels``)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, cos, sqrt, M_PI

cnp.import_array()


def se_cross(const double[:, ::1] X, const double[:, ::1] Y, double lengthscale):
    cdef Py_ssize_t n = X.shape[0], m = Y.shape[0], d = X.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double acc, diff
    cdef double scale = -0.5 / (lengthscale * lengthscale)
    out = np.empty((n, m), dtype=np.float64)
    cdef double[:, ::1] o = out
    with nogil:
        for i in range(n):
            for j in range(m):
                acc = 0.0
                for k in range(d):
                    diff = X[i, k] - Y[j, k]
                    acc = acc + diff * diff
                o[i, j] = scale * acc
    # numpy's exp is vectorized; libc exp in the loop is ~2x slower
    np.exp(out, out=out)
    return out


def matern_cross(const double[:, ::1] X, const double[:, ::1] Y, double nu, double lengthscale):
    cdef Py_ssize_t n = X.shape[0], m = Y.shape[0], d = X.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double acc, diff, r, s
    cdef int code
    if nu == 0.5:
        code = 0
    elif nu == 1.5:
        code = 1
    elif nu == 2.5:
        code = 2
    else:
        raise ValueError(f"unsupported Matern smoothness {nu}")
    out = np.empty((n, m), dtype=np.float64)
    cdef double[:, ::1] o = out
    with nogil:
        for i in range(n):
            for j in range(m):
                acc = 0.0
                for k in range(d):
                    diff = X[i, k] - Y[j, k]
                    acc = acc + diff * diff
                r = sqrt(acc) / lengthscale
                if code == 0:
                    o[i, j] = exp(-r)
                elif code == 1:
                    s = sqrt(3.0) * r
                    o[i, j] = (1.0 + s) * exp(-s)
                else:
                    s = sqrt(5.0) * r
                    o[i, j] = (1.0 + s + s * s / 3.0) * exp(-s)
    return out


def cosine_features(const double[::1] x, const double[::1] scale):
    cdef Py_ssize_t n = x.shape[0], J = scale.shape[0]
    cdef Py_ssize_t i, j
    cdef double theta
    out = np.empty((n, J), dtype=np.float64)
    cdef double[:, ::1] o = out
    with nogil:
        for i in range(n):
            theta = M_PI * x[i]
            for j in range(J):
                o[i, j] = scale[j] * cos(theta * (j + 1))
    return out
