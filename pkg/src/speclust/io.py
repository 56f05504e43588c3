"""Text file formats: sparse matrices, dense matrices, labels, edge lists.

All formats are whitespace-separated with 0-based indices. Floats are
written with shortest round-trip representation, so write/read cycles
are bit-exact for 64-bit values.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidFormat
from .sparse import CooMatrix, CsrMatrix, coo_canonicalize, csr_to_coo

__all__ = [
    "save_matrix",
    "load_matrix",
    "save_dense",
    "load_dense",
    "load_points",
    "save_labels",
    "load_labels",
    "save_edges",
    "load_edges",
]


def _fmt(v: float) -> str:
    return repr(float(v))


def save_matrix(path, m: CooMatrix | CsrMatrix):
    """Write a sparse matrix: header `n_rows n_cols nnz`, then entry lines.

    Entries are emitted in canonical (row, col) order.
    """
    if isinstance(m, CsrMatrix):
        m = csr_to_coo(m)
    else:
        m = coo_canonicalize(m)
    with open(path, "w") as f:
        f.write(f"{m.n_rows} {m.n_cols} {m.nnz}\n")
        for r, c, v in zip(m.rows, m.cols, m.vals):
            f.write(f"{r} {c} {_fmt(v)}\n")


def load_matrix(path, dup_policy: str = "sum") -> CooMatrix:
    """Read a sparse matrix file; entries may appear in any order."""
    with open(path) as f:
        header = f.readline().split()
        if len(header) != 3:
            raise InvalidFormat(f"{path}: expected header 'n_rows n_cols nnz'")
        n_rows, n_cols, nnz = (int(t) for t in header)
        rows = np.empty(nnz, dtype=np.int64)
        cols = np.empty(nnz, dtype=np.int64)
        vals = np.empty(nnz, dtype=np.float64)
        for i in range(nnz):
            parts = f.readline().split()
            if len(parts) != 3:
                raise InvalidFormat(f"{path}: bad entry line {i + 2}")
            rows[i] = int(parts[0])
            cols[i] = int(parts[1])
            vals[i] = float(parts[2])
    return coo_canonicalize(CooMatrix(n_rows, n_cols, rows, cols, vals), dup_policy)


def save_dense(path, a: np.ndarray):
    """Write a dense matrix: header `n d`, then n rows of d values."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise InvalidFormat("dense matrix must be two-dimensional")
    with open(path, "w") as f:
        f.write(f"{a.shape[0]} {a.shape[1]}\n")
        for row in a:
            f.write(" ".join(_fmt(v) for v in row) + "\n")


def load_dense(path) -> np.ndarray:
    """Read a dense matrix file written by :func:`save_dense`."""
    with open(path) as f:
        header = f.readline().split()
        if len(header) != 2:
            raise InvalidFormat(f"{path}: expected header 'n d'")
        n, d = (int(t) for t in header)
        out = np.empty((n, d), dtype=np.float64)
        for i in range(n):
            parts = f.readline().split()
            if len(parts) != d:
                raise InvalidFormat(f"{path}: row {i} has {len(parts)} values, expected {d}")
            out[i] = [float(t) for t in parts]
    return out


def load_points(path) -> np.ndarray:
    """Read a point matrix and validate it: finite, n >= 1, d >= 1."""
    x = load_dense(path)
    if x.shape[0] < 1 or x.shape[1] < 1:
        raise InvalidFormat(f"{path}: point matrix must be at least 1x1")
    if not np.all(np.isfinite(x)):
        raise InvalidFormat(f"{path}: point matrix must be finite")
    return x


def save_labels(path, labels: np.ndarray):
    """Write cluster labels, one integer per line."""
    with open(path, "w") as f:
        for v in np.asarray(labels, dtype=np.int64):
            f.write(f"{v}\n")


def load_labels(path) -> np.ndarray:
    with open(path) as f:
        return np.array([int(line) for line in f if line.strip()], dtype=np.int64)


def save_edges(path, pairs: np.ndarray):
    """Write an edge list, one `i j` pair per line."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    with open(path, "w") as f:
        for i, j in pairs:
            f.write(f"{i} {j}\n")


def load_edges(path) -> np.ndarray:
    rows = []
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 2:
                raise InvalidFormat(f"{path}: bad edge line {lineno}")
            rows.append((int(parts[0]), int(parts[1])))
    return np.array(rows, dtype=np.int64).reshape(-1, 2)
