# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled backward value-iteration sweep (same contract as _dp_fallback)."""

import numpy as np
from libc.math cimport INFINITY


def backward_sweep(c0, c1, grid, shift_idx, shift_w):
    cdef double[:, ::1] c0v = np.ascontiguousarray(c0, dtype=np.float64)
    cdef double[::1] c1v = np.ascontiguousarray(c1, dtype=np.float64)
    cdef double[::1] x = np.ascontiguousarray(grid, dtype=np.float64)
    cdef Py_ssize_t[::1] ks = np.ascontiguousarray(shift_idx, dtype=np.intp)
    cdef double[::1] ws = np.ascontiguousarray(shift_w, dtype=np.float64)
    cdef Py_ssize_t nt = c0v.shape[0], nc = c0v.shape[1], nx = x.shape[0]
    out = np.empty((nt + 1, nx), dtype=np.float64)
    cdef double[:, ::1] V = out
    cdef Py_ssize_t n, j, c, src, lo, hi, k
    cdef double w, best, q, base

    for j in range(nx):
        V[nt, j] = 0.0
    for n in range(nt - 1, -1, -1):
        for j in range(nx):
            V[n, j] = INFINITY
        for c in range(nc):
            k = ks[c]
            w = ws[c]
            lo = 0 if k >= 0 else -k
            hi = nx - k - (1 if w > 0 else 0)
            if hi > nx:
                hi = nx
            for j in range(lo, hi):
                src = j + k
                if w > 0:
                    q = (1.0 - w) * V[n + 1, src] + w * V[n + 1, src + 1]
                else:
                    q = V[n + 1, src]
                q = q + (c1v[n] * x[j] + c0v[n, c])
                if q < V[n, j]:
                    V[n, j] = q
    return out
