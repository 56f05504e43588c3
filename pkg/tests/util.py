"""Shared test helpers: dense/sparse converters and random instances."""

import numpy as np

from speclust.sparse import CooMatrix, CsrMatrix, coo_canonicalize, coo_to_csr


def dense_to_coo(a) -> CooMatrix:
    a = np.asarray(a, dtype=np.float64)
    r, c = np.nonzero(a)
    return coo_canonicalize(CooMatrix(a.shape[0], a.shape[1], r, c, a[r, c]))


def dense_to_csr(a) -> CsrMatrix:
    return coo_to_csr(dense_to_coo(a))


def csr_to_dense(m: CsrMatrix) -> np.ndarray:
    out = np.zeros((m.n_rows, m.n_cols))
    rows = m.row_indices()
    out[rows, m.col_idx] = m.vals
    return out


def random_coo(rng, n_rows=None, n_cols=None, max_nnz=64) -> CooMatrix:
    """Random canonical COO matrix with unique (row, col) positions."""
    n_rows = n_rows if n_rows is not None else int(rng.integers(1, 30))
    n_cols = n_cols if n_cols is not None else int(rng.integers(1, 30))
    nnz = int(rng.integers(0, min(max_nnz, n_rows * n_cols) + 1))
    flat = rng.choice(n_rows * n_cols, size=nnz, replace=False)
    vals = rng.standard_normal(nnz)
    return coo_canonicalize(
        CooMatrix(n_rows, n_cols, flat // n_cols, flat % n_cols, vals)
    )


def random_symmetric_dense(rng, n, density=0.1) -> np.ndarray:
    """Random symmetric matrix with a zero diagonal allowed to fill in."""
    a = np.zeros((n, n))
    nnz = max(1, int(density * n * n / 2))
    i = rng.integers(0, n, nnz)
    j = rng.integers(0, n, nnz)
    a[i, j] = rng.standard_normal(nnz)
    return a + a.T


def random_connected_graph(rng, n, extra_edges=None) -> np.ndarray:
    """Random connected weighted graph as a dense symmetric matrix with
    positive weights and zero diagonal (spanning tree plus extras)."""
    w = np.zeros((n, n))
    order = rng.permutation(n)
    for idx in range(1, n):
        a = order[idx]
        b = order[int(rng.integers(0, idx))]
        w[a, b] = w[b, a] = rng.uniform(0.5, 2.0)
    extra = extra_edges if extra_edges is not None else n
    for _ in range(extra):
        a, b = rng.integers(0, n, 2)
        if a != b:
            val = rng.uniform(0.5, 2.0)
            w[a, b] = w[b, a] = val
    return w


def path_graph(n=3) -> np.ndarray:
    w = np.zeros((n, n))
    for i in range(n - 1):
        w[i, i + 1] = w[i + 1, i] = 1.0
    return w
