"""Pure numpy/scipy implementations of the clustering kernels.

Fallback used when the compiled extension is unavailable. Each function
matches the extension's contract: squared distances are computed as
``|x|^2 - 2 x.c + |c|^2`` with ties in the argmin broken toward the lowest
centroid index, and accumulation visits rows in ascending order.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix


def _as_csr(data, indices, indptr, n_cols):
    n_rows = len(indptr) - 1
    return csr_matrix((data, indices, indptr), shape=(n_rows, n_cols))


def assign_nearest(data, indices, indptr, row_norm2, centroids, cent_norm2):
    """Nearest centroid per row by squared Euclidean distance.

    Returns ``(labels, dist2)`` where ``dist2[i]`` is the distance to the
    chosen centroid.
    """
    x = _as_csr(data, indices, indptr, centroids.shape[1])
    dots = x @ centroids.T
    d2 = row_norm2[:, None] - 2.0 * dots + cent_norm2[None, :]
    labels = np.argmin(d2, axis=1).astype(np.int64)
    best = d2[np.arange(len(labels)), labels]
    return labels, np.ascontiguousarray(best)


def dist2_to_assigned(data, indices, indptr, row_norm2, labels, centroids, cent_norm2):
    """Squared distance of each row to its assigned centroid."""
    x = _as_csr(data, indices, indptr, centroids.shape[1])
    dots = x @ centroids.T
    picked = dots[np.arange(len(labels)), labels]
    return row_norm2 - 2.0 * picked + cent_norm2[labels]


def accumulate_clusters(data, indices, indptr, labels, active, k, n_cols):
    """Per-cluster coordinate sums and member counts over active rows."""
    n_rows = len(indptr) - 1
    sums = np.zeros((k, n_cols), dtype=np.float64)
    counts = np.zeros(k, dtype=np.int64)
    lengths = np.diff(indptr)
    active = np.asarray(active, dtype=bool)
    row_ids = np.repeat(np.arange(n_rows), lengths)
    keep = active[row_ids]
    # np.add.at applies additions sequentially, preserving row order.
    np.add.at(sums, (labels[row_ids[keep]], indices[keep]), data[keep])
    counts += np.bincount(labels[active], minlength=k)
    return sums, counts
