import numpy as np
import pytest

from necluster import FeatureSpace
from necluster.kernels import CsrRows, l2_normalize, rows_from_vectors
from necluster.vsm import SparseVector
from necluster import _pykernels

ckernels = pytest.importorskip(
    "necluster._ckernels", reason="compiled kernels not built")


def _random_case(seed, n=40, dim=12, k=5, density=0.4, with_empty=True):
    rng = np.random.default_rng(seed)
    vecs = []
    for i in range(n):
        if with_empty and i % 11 == 3:
            vecs.append(SparseVector(FeatureSpace.NAME, {}))
            continue
        dims = rng.choice(dim, size=max(1, int(density * dim)), replace=False)
        vecs.append(SparseVector(FeatureSpace.NAME,
                                 {int(d): float(rng.random() + 0.1) for d in sorted(dims)}))
    rows = rows_from_vectors(vecs, n_cols=dim)
    centroids = rng.random((k, dim))
    cent_norm2 = np.einsum("ij,ij->i", centroids, centroids)
    return rows, centroids, cent_norm2


@pytest.mark.parametrize("seed", range(5))
def test_assign_nearest_matches(seed):
    rows, centroids, cent_norm2 = _random_case(seed)
    lab_c, d2_c = ckernels.assign_nearest(rows.data, rows.indices, rows.indptr,
                                          rows.row_norm2(), centroids, cent_norm2)
    lab_p, d2_p = _pykernels.assign_nearest(rows.data, rows.indices, rows.indptr,
                                            rows.row_norm2(), centroids, cent_norm2)
    assert np.array_equal(np.asarray(lab_c), np.asarray(lab_p))
    assert np.allclose(np.asarray(d2_c), np.asarray(d2_p), atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_dist2_to_assigned_matches(seed):
    rows, centroids, cent_norm2 = _random_case(seed)
    labels = np.random.default_rng(seed + 100).integers(
        0, centroids.shape[0], rows.n_rows).astype(np.int64)
    d_c = ckernels.dist2_to_assigned(rows.data, rows.indices, rows.indptr,
                                     rows.row_norm2(), labels, centroids, cent_norm2)
    d_p = _pykernels.dist2_to_assigned(rows.data, rows.indices, rows.indptr,
                                       rows.row_norm2(), labels, centroids, cent_norm2)
    assert np.allclose(np.asarray(d_c), np.asarray(d_p), atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_accumulate_clusters_matches(seed):
    rows, centroids, _ = _random_case(seed)
    k = centroids.shape[0]
    rng = np.random.default_rng(seed + 200)
    labels = rng.integers(0, k, rows.n_rows).astype(np.int64)
    active = (rng.random(rows.n_rows) < 0.8)
    s_c, n_c = ckernels.accumulate_clusters(rows.data, rows.indices, rows.indptr,
                                            labels, active.astype(np.uint8), k,
                                            rows.n_cols)
    s_p, n_p = _pykernels.accumulate_clusters(rows.data, rows.indices, rows.indptr,
                                              labels, active.astype(np.uint8), k,
                                              rows.n_cols)
    assert np.array_equal(np.asarray(n_c), np.asarray(n_p))
    assert np.allclose(np.asarray(s_c), np.asarray(s_p), atol=1e-12)


def test_tie_breaks_to_lowest_centroid():
    # two identical centroids: every row must pick index 0
    vecs = [SparseVector(FeatureSpace.NAME, {0: 1.0, 2: 0.5}),
            SparseVector(FeatureSpace.NAME, {1: 2.0})]
    rows = rows_from_vectors(vecs, n_cols=3)
    centroids = np.array([[1.0, 0.0, 0.5], [1.0, 0.0, 0.5]])
    cent_norm2 = np.einsum("ij,ij->i", centroids, centroids)
    for impl in (ckernels, _pykernels):
        labels, _ = impl.assign_nearest(rows.data, rows.indices, rows.indptr,
                                        rows.row_norm2(), centroids, cent_norm2)
        assert np.asarray(labels).tolist() == [0, 0]


def test_row_norm2_with_empty_rows():
    vecs = [SparseVector(FeatureSpace.NAME, {0: 3.0, 1: 4.0}),
            SparseVector(FeatureSpace.NAME, {}),
            SparseVector(FeatureSpace.NAME, {2: 2.0}),
            SparseVector(FeatureSpace.NAME, {})]
    rows = rows_from_vectors(vecs, n_cols=3)
    assert rows.row_norm2().tolist() == [25.0, 0.0, 4.0, 0.0]


def test_l2_normalize():
    vecs = [SparseVector(FeatureSpace.NAME, {0: 3.0, 1: 4.0}),
            SparseVector(FeatureSpace.NAME, {})]
    rows = rows_from_vectors(vecs, n_cols=2)
    unit, norms = l2_normalize(rows)
    assert norms[0] == pytest.approx(1.0, abs=1e-12)
    assert norms[1] == 0.0
    assert unit.data.tolist() == pytest.approx([0.6, 0.8], abs=1e-12)


def test_rows_from_vectors_layout():
    vecs = [SparseVector(FeatureSpace.NAME, {2: 1.0, 0: 2.0}),
            SparseVector(FeatureSpace.NAME, {1: 3.0})]
    rows = rows_from_vectors(vecs)
    assert rows.indptr.tolist() == [0, 2, 3]
    # dims ascend within each row regardless of dict insertion order
    assert rows.indices.tolist() == [0, 2, 1]
    assert rows.data.tolist() == [2.0, 1.0, 3.0]
    assert rows.n_cols == 3
