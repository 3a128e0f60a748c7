# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for Lloyd iteration over CSR document vectors.

Semantics mirror ``_pykernels`` exactly: same distance expression, same
tie-breaking (lowest centroid index), same accumulation order (ascending
row, then ascending column within a row).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def assign_nearest(const double[::1] data,
                   const cnp.int64_t[::1] indices,
                   const cnp.int64_t[::1] indptr,
                   const double[::1] row_norm2,
                   const double[:, ::1] centroids,
                   const double[::1] cent_norm2):
    """Nearest centroid per row by squared Euclidean distance."""
    cdef Py_ssize_t n = row_norm2.shape[0]
    cdef Py_ssize_t k = centroids.shape[0]
    labels_arr = np.zeros(n, dtype=np.int64)
    dist_arr = np.zeros(n, dtype=np.float64)
    cdef cnp.int64_t[::1] labels = labels_arr
    cdef double[::1] dist = dist_arr
    cdef Py_ssize_t i, c, p, start, end, best_c
    cdef double acc, d, best
    with nogil:
        for i in range(n):
            start = indptr[i]
            end = indptr[i + 1]
            best = 0.0
            best_c = 0
            for c in range(k):
                acc = 0.0
                for p in range(start, end):
                    acc += data[p] * centroids[c, indices[p]]
                d = row_norm2[i] - 2.0 * acc + cent_norm2[c]
                if c == 0 or d < best:
                    best = d
                    best_c = c
            labels[i] = best_c
            dist[i] = best
    return labels_arr, dist_arr


def dist2_to_assigned(const double[::1] data,
                      const cnp.int64_t[::1] indices,
                      const cnp.int64_t[::1] indptr,
                      const double[::1] row_norm2,
                      const cnp.int64_t[::1] labels,
                      const double[:, ::1] centroids,
                      const double[::1] cent_norm2):
    """Squared distance of each row to its assigned centroid."""
    cdef Py_ssize_t n = row_norm2.shape[0]
    dist_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] dist = dist_arr
    cdef Py_ssize_t i, p, start, end
    cdef cnp.int64_t c
    cdef double acc
    with nogil:
        for i in range(n):
            start = indptr[i]
            end = indptr[i + 1]
            c = labels[i]
            acc = 0.0
            for p in range(start, end):
                acc += data[p] * centroids[c, indices[p]]
            dist[i] = row_norm2[i] - 2.0 * acc + cent_norm2[c]
    return dist_arr


def accumulate_clusters(const double[::1] data,
                        const cnp.int64_t[::1] indices,
                        const cnp.int64_t[::1] indptr,
                        const cnp.int64_t[::1] labels,
                        const cnp.uint8_t[::1] active,
                        Py_ssize_t k,
                        Py_ssize_t n_cols):
    """Per-cluster coordinate sums and member counts over active rows."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    sums_arr = np.zeros((k, n_cols), dtype=np.float64)
    counts_arr = np.zeros(k, dtype=np.int64)
    cdef double[:, ::1] sums = sums_arr
    cdef cnp.int64_t[::1] counts = counts_arr
    cdef Py_ssize_t i, p, start, end
    cdef cnp.int64_t c
    with nogil:
        for i in range(n):
            if active[i] == 0:
                continue
            c = labels[i]
            counts[c] += 1
            start = indptr[i]
            end = indptr[i + 1]
            for p in range(start, end):
                sums[c, indices[p]] += data[p]
    return sums_arr, counts_arr
