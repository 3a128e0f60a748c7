"""Benchmark the compiled clustering kernels against the numpy fallback.

Builds a synthetic sparse corpus in CSR form, then times the three hot
Lloyd-iteration operations (nearest-centroid assignment, distance to the
assigned centroid, per-cluster accumulation) under both backends and
reports the speedup. Outputs are cross-checked for equality first, so the
numbers compare like with like.

Usage:
    python3 benchmarks/bench_kernels.py [--rows N] [--cols N] [--nnz N]
                                        [--k N] [--repeat N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from necluster import _pykernels
from necluster.kernels import CsrRows, centroid_norm2, l2_normalize

try:
    from necluster import _ckernels
except ImportError:
    _ckernels = None


def make_dataset(rng, n_rows, n_cols, nnz_per_row):
    data, indices, indptr = [], [], [0]
    for _ in range(n_rows):
        nnz = int(rng.integers(1, 2 * nnz_per_row))
        cols = np.sort(rng.choice(n_cols, size=min(nnz, n_cols), replace=False))
        indices.extend(cols.tolist())
        data.extend(rng.random(len(cols)).tolist())
        indptr.append(len(indices))
    rows = CsrRows(data=np.asarray(data), indices=np.asarray(indices, dtype=np.int64),
                   indptr=np.asarray(indptr, dtype=np.int64),
                   n_rows=n_rows, n_cols=n_cols)
    unit, norm2 = l2_normalize(rows)
    return unit, norm2


def time_call(fn, args, repeat):
    best = np.inf
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rows", type=int, default=20000)
    parser.add_argument("--cols", type=int, default=2000)
    parser.add_argument("--nnz", type=int, default=15, help="mean nonzeros per row")
    parser.add_argument("--k", type=int, default=50)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    if _ckernels is None:
        raise SystemExit("compiled extension not importable; rebuild and retry "
                         "(pip install -e . --no-build-isolation)")

    rng = np.random.default_rng(args.seed)
    rows, norm2 = make_dataset(rng, args.rows, args.cols, args.nnz)
    centroids = np.abs(rng.normal(size=(args.k, args.cols)))
    centroids /= np.linalg.norm(centroids, axis=1, keepdims=True)
    cnorm2 = centroid_norm2(centroids)
    csr = (rows.data, rows.indices, rows.indptr)

    labels_c, dist_c = _ckernels.assign_nearest(*csr, norm2, centroids, cnorm2)
    labels_p, dist_p = _pykernels.assign_nearest(*csr, norm2, centroids, cnorm2)
    assert np.array_equal(labels_c, labels_p), "backends disagree on labels"
    assert np.allclose(dist_c, dist_p, atol=1e-12), "backends disagree on distances"
    active = np.ones(rows.n_rows, dtype=np.uint8)
    sums_c, counts_c = _ckernels.accumulate_clusters(*csr, labels_c, active,
                                                     args.k, args.cols)
    sums_p, counts_p = _pykernels.accumulate_clusters(*csr, labels_c, active,
                                                      args.k, args.cols)
    assert np.array_equal(counts_c, counts_p)
    assert np.allclose(sums_c, sums_p, atol=1e-12)

    cases = [
        ("assign_nearest", (norm2, centroids, cnorm2), "assign_nearest"),
        ("dist2_to_assigned", (norm2, labels_c, centroids, cnorm2),
         "dist2_to_assigned"),
        ("accumulate_clusters", (labels_c, active, args.k, args.cols),
         "accumulate_clusters"),
    ]
    print(f"rows={args.rows} cols={args.cols} k={args.k} "
          f"nnz={len(rows.data)} repeat={args.repeat} (best of)")
    print(f"{'operation':<22}{'cython (ms)':>14}{'numpy (ms)':>14}{'speedup':>10}")
    for name, extra, attr in cases:
        t_c = time_call(getattr(_ckernels, attr), csr + extra, args.repeat)
        t_p = time_call(getattr(_pykernels, attr), csr + extra, args.repeat)
        print(f"{name:<22}{t_c * 1e3:>14.3f}{t_p * 1e3:>14.3f}"
              f"{t_p / t_c:>10.2f}x")


if __name__ == "__main__":
    main()
