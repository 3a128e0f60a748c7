"""Seeded k-means over sparse document vectors.

Vectors are L2-normalized before clustering so that squared Euclidean
distance orders pairs exactly like cosine similarity (|a-b|^2 = 2 - 2cos
for unit vectors). Lloyd iteration converges on the within-cluster sum of
squares, which provably never increases under mean-centroid updates; the
plain sum of point-to-centroid distances is reported alongside for
inspection. Runs are a pure function of (vectors, k, seed, max_iterations).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .kernels import CsrRows, centroid_norm2, l2_normalize, rows_from_vectors


@dataclass
class Assignment:
    """Result of one k-means run."""

    k: int
    labels: np.ndarray  # (n,) int64, cluster index per document
    centroids: np.ndarray  # (k, dim) float64
    objective_trace: list[float] = field(default_factory=list)  # sum of distances
    inertia_trace: list[float] = field(default_factory=list)  # sum of squared distances
    n_iter: int = 0

    @property
    def inertia(self) -> float:
        return self.inertia_trace[-1] if self.inertia_trace else 0.0

    def cluster_members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.labels == c)


def _dense_row(rows: CsrRows, i: int) -> np.ndarray:
    out = np.zeros(rows.n_cols, dtype=np.float64)
    lo, hi = rows.indptr[i], rows.indptr[i + 1]
    out[rows.indices[lo:hi]] = rows.data[lo:hi]
    return out


def _plus_plus_init(rows: CsrRows, row_norm2: np.ndarray, candidates: np.ndarray,
                    k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding restricted to nonzero rows.

    When the remaining candidates are all at distance zero (duplicates), the
    unchosen candidate with the lowest row index fills the slot.
    """
    dim = rows.n_cols
    centroids = np.zeros((k, dim), dtype=np.float64)
    chosen: list[int] = []
    first = int(candidates[rng.integers(len(candidates))])
    centroids[0] = _dense_row(rows, first)
    chosen.append(first)

    d2 = np.zeros(rows.n_rows, dtype=np.float64)
    _, d2_new = kernels.assign_nearest(
        rows.data, rows.indices, rows.indptr, row_norm2,
        centroids[0:1], centroid_norm2(centroids[0:1]))
    d2 = np.maximum(d2_new, 0.0)

    for j in range(1, k):
        cand_d2 = d2[candidates]
        cum = np.cumsum(cand_d2)
        total = cum[-1] if len(cum) else 0.0
        if total > 0.0:
            r = rng.random() * total
            pos = int(np.searchsorted(cum, r, side="right"))
            pos = min(pos, len(candidates) - 1)
            pick = int(candidates[pos])
        else:
            remaining = [int(i) for i in candidates if int(i) not in set(chosen)]
            if not remaining:
                break
            pick = remaining[0]
        centroids[j] = _dense_row(rows, pick)
        chosen.append(pick)
        _, d2_new = kernels.assign_nearest(
            rows.data, rows.indices, rows.indptr, row_norm2,
            centroids[j:j + 1], centroid_norm2(centroids[j:j + 1]))
        d2 = np.minimum(d2, np.maximum(d2_new, 0.0))
    return centroids


def _repair_empty(labels: np.ndarray, counts: np.ndarray, d2: np.ndarray,
                  nonzero_mask: np.ndarray) -> bool:
    """Move the farthest point into each empty cluster as a new singleton.

    Only donors from clusters with at least two members are eligible, so a
    repair never empties another cluster. Ties break toward the lowest row
    index. Returns True when any label changed.
    """
    changed = False
    k = len(counts)
    for c in range(k):
        if counts[c] > 0:
            continue
        eligible = nonzero_mask & (counts[labels] >= 2)
        if not eligible.any():
            continue
        masked = np.where(eligible, d2, -np.inf)
        donor = int(np.argmax(masked))
        counts[labels[donor]] -= 1
        counts[c] += 1
        labels[donor] = c
        changed = True
    return changed


def kmeans(vectors, k: int, seed: int = 42, max_iterations: int = 100) -> Assignment:
    """Lloyd iteration with seeded k-means++ initialization.

    Zero vectors (documents with no features in this space) are pinned to
    cluster 0 and excluded from centroid updates and from both objectives.
    Stops when assignments repeat or after ``max_iterations``.
    """
    n = len(vectors)
    if n == 0:
        raise ValueError("cannot cluster an empty vector list")
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range [1, {n}]")
    if max_iterations < 1:
        raise ValueError("max_iterations must be positive")
    spaces = {v.space for v in vectors}
    if len(spaces) > 1:
        raise ValueError("vectors must share one feature space")

    raw = rows_from_vectors(vectors)
    rows, row_norm2 = l2_normalize(raw)
    nonzero_mask = row_norm2 > 0.0
    active = nonzero_mask.astype(np.uint8)
    candidates = np.flatnonzero(nonzero_mask)
    dim = rows.n_cols

    if len(candidates) == 0:
        return Assignment(
            k=k,
            labels=np.zeros(n, dtype=np.int64),
            centroids=np.zeros((k, max(dim, 1)), dtype=np.float64),
            objective_trace=[0.0],
            inertia_trace=[0.0],
            n_iter=1,
        )

    rng = np.random.default_rng(seed)
    centroids = _plus_plus_init(rows, row_norm2, candidates, k, rng)

    labels = None
    objective_trace: list[float] = []
    inertia_trace: list[float] = []
    for _ in range(max_iterations):
        cn2 = centroid_norm2(centroids)
        new_labels, _ = kernels.assign_nearest(
            rows.data, rows.indices, rows.indptr, row_norm2, centroids, cn2)
        new_labels[~nonzero_mask] = 0
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels

        sums, counts = kernels.accumulate_clusters(
            rows.data, rows.indices, rows.indptr, labels, active, k, dim)
        new_centroids = centroids.copy()
        occupied = counts > 0
        new_centroids[occupied] = sums[occupied] / counts[occupied, None]

        if not occupied.all():
            d2 = kernels.dist2_to_assigned(
                rows.data, rows.indices, rows.indptr, row_norm2, labels,
                new_centroids, centroid_norm2(new_centroids))
            if _repair_empty(labels, counts, np.maximum(d2, 0.0), nonzero_mask):
                sums, counts = kernels.accumulate_clusters(
                    rows.data, rows.indices, rows.indptr, labels, active, k, dim)
                new_centroids = centroids.copy()
                occupied = counts > 0
                new_centroids[occupied] = sums[occupied] / counts[occupied, None]
        centroids = new_centroids

        d2 = kernels.dist2_to_assigned(
            rows.data, rows.indices, rows.indptr, row_norm2, labels,
            centroids, centroid_norm2(centroids))
        d2 = np.maximum(d2[nonzero_mask], 0.0)
        inertia_trace.append(float(d2.sum()))
        objective_trace.append(float(np.sqrt(d2).sum()))

    return Assignment(
        k=k,
        labels=labels,
        centroids=centroids,
        objective_trace=objective_trace,
        inertia_trace=inertia_trace,
        n_iter=len(inertia_trace),
    )


def kmeans_best_of(vectors, k: int, seed: int = 42, restarts: int = 4,
                   max_iterations: int = 100) -> Assignment:
    """Best of ``restarts`` runs seeded ``seed .. seed+restarts-1``.

    Selection is by final within-cluster sum of squares; ties keep the
    earliest restart.
    """
    if restarts < 1:
        raise ValueError("restarts must be positive")
    best: Assignment | None = None
    for r in range(restarts):
        run = kmeans(vectors, k, seed=seed + r, max_iterations=max_iterations)
        if best is None or run.inertia < best.inertia:
            best = run
    return best
