# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled hot kernels.

Must stay bit-identical to the pure-numpy fallback: squared distances are
accumulated dimension by dimension per point, comparisons are exact, and
argmax breaks ties toward the lowest index. No fused multiply-adds (the
build disables floating-point contraction).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def update_min_sqdist_coords(const double[:, ::1] points, Py_ssize_t seed,
                             double[::1] min_d2):
    """Min-update min_d2 with squared distances to points[seed]; return argmax.

    min_d2 is updated in place. The returned index is the first position
    attaining the maximum of the updated array (lowest-index tie break).
    """
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t d = points.shape[1]
    cdef Py_ssize_t i, t, best_i
    cdef double acc, diff, best
    for i in range(n):
        acc = 0.0
        for t in range(d):
            diff = points[i, t] - points[seed, t]
            acc += diff * diff
        if acc < min_d2[i]:
            min_d2[i] = acc
    best = min_d2[0]
    best_i = 0
    for i in range(1, n):
        if min_d2[i] > best:
            best = min_d2[i]
            best_i = i
    return best_i


def update_min_sqdist_row(const double[::1] d2row, double[::1] min_d2):
    """Matrix-variant step: min-update with a precomputed squared-distance row."""
    cdef Py_ssize_t n = d2row.shape[0]
    cdef Py_ssize_t i, best_i
    cdef double best
    for i in range(n):
        if d2row[i] < min_d2[i]:
            min_d2[i] = d2row[i]
    best = min_d2[0]
    best_i = 0
    for i in range(1, n):
        if min_d2[i] > best:
            best = min_d2[i]
            best_i = i
    return best_i


def seed_sqdist_table(const double[:, ::1] points, const cnp.int64_t[::1] seeds):
    """n-by-k table of squared distances from every point to each seed."""
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t d = points.shape[1]
    cdef Py_ssize_t k = seeds.shape[0]
    table = np.empty((n, k), dtype=np.float64)
    cdef double[:, ::1] tv = table
    cdef Py_ssize_t i, j, t, s
    cdef double acc, diff
    for j in range(k):
        s = seeds[j]
        for i in range(n):
            acc = 0.0
            for t in range(d):
                diff = points[i, t] - points[s, t]
                acc += diff * diff
            tv[i, j] = acc
    return table


def region_scan(const double[:, ::1] table, double r2):
    """Coverage masks and per-mask counts at squared radius r2.

    table is n-by-k (distances to the k balls of one center tuple). Returns
    (masks, counts) where masks[p] has bit j set iff table[p, j] <= r2
    (exact comparison) and counts has length 2**k with counts[m] the number
    of points whose mask is m; counts[0] counts uncovered points.
    """
    cdef Py_ssize_t n = table.shape[0]
    cdef Py_ssize_t k = table.shape[1]
    masks = np.zeros(n, dtype=np.int64)
    counts = np.zeros(1 << k, dtype=np.int64)
    cdef cnp.int64_t[::1] mv = masks
    cdef cnp.int64_t[::1] cv = counts
    cdef Py_ssize_t i, j
    cdef cnp.int64_t m
    for i in range(n):
        m = 0
        for j in range(k):
            if table[i, j] <= r2:
                m |= <cnp.int64_t> 1 << j
        mv[i] = m
        cv[m] += 1
    return masks, counts
