# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled inner loops for alignment scoring and pairwise hinge training."""

import numpy as np

cimport numpy as cnp

BACKEND = "native"


def cwasa_match_total(double[:, ::1] a, double[:, ::1] b):
    """Sum of best-match cosines in both directions, negatives clipped to 0."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = b.shape[0]
    cdef Py_ssize_t dim = a.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double total = 0.0
    cdef double best_row, dot
    best_col_arr = np.zeros(m, dtype=np.float64)
    cdef double[::1] best_col = best_col_arr
    for i in range(n):
        best_row = 0.0
        for j in range(m):
            dot = 0.0
            for k in range(dim):
                dot += a[i, k] * b[j, k]
            if dot > best_row:
                best_row = dot
            if dot > best_col[j]:
                best_col[j] = dot
        total += best_row
    for j in range(m):
        total += best_col[j]
    return total


def rank_hinge_epoch(
    double[::1] w,
    double[:, ::1] diffs,
    cnp.int64_t[::1] order,
    double cost,
    long long t0,
):
    """One epoch of pairwise hinge subgradient steps, updating ``w`` in place."""
    cdef Py_ssize_t n_pairs = diffs.shape[0]
    cdef Py_ssize_t dim = w.shape[0]
    cdef Py_ssize_t s, k
    cdef Py_ssize_t idx
    cdef double inv_pairs = 1.0 / n_pairs
    cdef double margin, eta, shrink, scale
    cdef long long t = t0
    for s in range(n_pairs):
        idx = order[s]
        margin = 0.0
        for k in range(dim):
            margin += w[k] * diffs[idx, k]
        eta = inv_pairs / (1.0 + t * inv_pairs)
        shrink = 1.0 - eta * inv_pairs
        if margin < 1.0:
            scale = eta * cost
            for k in range(dim):
                w[k] = w[k] * shrink + scale * diffs[idx, k]
        else:
            for k in range(dim):
                w[k] = w[k] * shrink
        t += 1
    return t
