"""Backend selection and shared CSR preparation for the clustering kernels.

The three hot operations of Lloyd iteration (nearest-centroid assignment,
distance-to-assigned-centroid, per-cluster accumulation) exist twice: a
compiled Cython extension and a numpy/scipy fallback with identical
semantics. The extension is preferred when importable; set NECLUSTER_PURE=1
to force the fallback. Both backends fix their summation orders, so results
are reproducible run to run regardless of worker count.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _pykernels

if os.environ.get("NECLUSTER_PURE", "").strip() in ("", "0"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"
else:
    _impl = _pykernels
    BACKEND = "python"

assign_nearest = _impl.assign_nearest
dist2_to_assigned = _impl.dist2_to_assigned
accumulate_clusters = _impl.accumulate_clusters


@dataclass
class CsrRows:
    """Row-major sparse matrix (CSR arrays) for one batch of vectors."""

    data: np.ndarray  # float64, nonzero values
    indices: np.ndarray  # int64, column of each value
    indptr: np.ndarray  # int64, row boundaries, len n_rows + 1
    n_rows: int
    n_cols: int

    def row_norm2(self) -> np.ndarray:
        sq = self.data * self.data
        lengths = np.diff(self.indptr)
        row_ids = np.repeat(np.arange(self.n_rows), lengths)
        return np.bincount(row_ids, weights=sq, minlength=self.n_rows)


def rows_from_vectors(vectors, n_cols: int | None = None) -> CsrRows:
    """Pack sparse vectors into CSR arrays with ascending column order per row."""
    data: list[float] = []
    indices: list[int] = []
    indptr = [0]
    max_col = -1
    for vec in vectors:
        for dim in sorted(vec.entries):
            indices.append(dim)
            data.append(vec.entries[dim])
            if dim > max_col:
                max_col = dim
        indptr.append(len(indices))
    if n_cols is None:
        n_cols = max_col + 1
    return CsrRows(
        data=np.asarray(data, dtype=np.float64),
        indices=np.asarray(indices, dtype=np.int64),
        indptr=np.asarray(indptr, dtype=np.int64),
        n_rows=len(vectors),
        n_cols=n_cols,
    )


def l2_normalize(rows: CsrRows) -> tuple[CsrRows, np.ndarray]:
    """Scale each nonzero row to unit L2 norm; zero rows pass through.

    Returns the scaled rows plus the recomputed squared norms (1.0 up to
    rounding for nonzero rows, exactly 0.0 for zero rows).
    """
    norms = np.sqrt(rows.row_norm2())
    lengths = np.diff(rows.indptr)
    scale = np.where(norms > 0.0, norms, 1.0)
    data = rows.data / np.repeat(scale, lengths)
    scaled = CsrRows(
        data=data,
        indices=rows.indices,
        indptr=rows.indptr,
        n_rows=rows.n_rows,
        n_cols=rows.n_cols,
    )
    return scaled, scaled.row_norm2()


def centroid_norm2(centroids: np.ndarray) -> np.ndarray:
    return np.einsum("ij,ij->i", centroids, centroids)
