"""Degree computation and normalized operators derived from W.

The clustering pipeline targets the largest eigenpairs of the row-scaled
operator (each row of W divided by its degree). That operator is similar
to the symmetric form obtained by scaling both sides with the inverse
square roots of the degrees, so the symmetric Lanczos solver runs on the
symmetric form and :func:`recover_row_eigvecs` maps its eigenvectors
back. The mapping is exact for positive degrees.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, IsolatedNode, NotSquare, ZeroDegree
from .sparse import CsrMatrix, spmv

__all__ = [
    "degrees",
    "handle_isolated",
    "row_scale",
    "sym_scale",
    "recover_row_eigvecs",
]


def degrees(w: CsrMatrix) -> np.ndarray:
    """Row sums of W, computed as W applied to the all-ones vector."""
    if w.n_rows != w.n_cols:
        raise NotSquare(f"degree computation requires a square matrix, got {w.n_rows}x{w.n_cols}")
    return spmv(w, np.ones(w.n_cols))


def handle_isolated(
    w: CsrMatrix, d: np.ndarray, policy: str = "error"
) -> tuple[CsrMatrix, np.ndarray, np.ndarray]:
    """Deal with zero-degree nodes before normalization.

    policy "error" raises IsolatedNode if any degree is zero; policy
    "remove" returns the induced submatrix on positive-degree nodes.
    Returns (matrix, degrees, remap) where remap[old] is the new index
    or -1 for removed nodes.
    """
    if policy not in ("error", "remove"):
        raise ValueError(f"unknown isolated-node policy {policy!r}")
    d = np.asarray(d, dtype=np.float64)
    isolated = np.flatnonzero(d == 0.0)
    identity = np.arange(w.n_rows, dtype=np.int64)
    if len(isolated) == 0:
        return w, d, identity
    if policy == "error":
        raise IsolatedNode(isolated)
    keep = d != 0.0
    remap = np.full(w.n_rows, -1, dtype=np.int64)
    remap[keep] = np.arange(int(keep.sum()), dtype=np.int64)
    rows = w.row_indices()
    mask = keep[rows] & keep[w.col_idx]
    new_rows = remap[rows[mask]]
    new_cols = remap[w.col_idx[mask]]
    n_new = int(keep.sum())
    counts = np.bincount(new_rows, minlength=n_new)
    row_ptr = np.concatenate(([0], np.cumsum(counts, dtype=np.int64)))
    sub = CsrMatrix(n_new, n_new, row_ptr, new_cols, w.vals[mask])
    return sub, d[keep], remap


def _check_positive(d: np.ndarray) -> np.ndarray:
    d = np.asarray(d, dtype=np.float64)
    if np.any(d <= 0.0):
        bad = int(np.flatnonzero(d <= 0.0)[0])
        raise ZeroDegree(f"non-positive degree at node {bad}")
    return d


def row_scale(w: CsrMatrix, d: np.ndarray) -> CsrMatrix:
    """Divide each row of W by its degree; the result is row-stochastic."""
    d = _check_positive(d)
    if len(d) != w.n_rows:
        raise DimensionMismatch(f"degree vector length {len(d)} does not match n_rows {w.n_rows}")
    vals = w.vals / d[w.row_indices()]
    return CsrMatrix(w.n_rows, w.n_cols, w.row_ptr, w.col_idx, vals)


def sym_scale(w: CsrMatrix, d: np.ndarray) -> CsrMatrix:
    """Scale entry (i, j) by 1/sqrt(deg_i * deg_j); exactly symmetric for
    symmetric W since mirrored entries get the identical scale factor."""
    d = _check_positive(d)
    if len(d) != w.n_rows:
        raise DimensionMismatch(f"degree vector length {len(d)} does not match n_rows {w.n_rows}")
    scale = np.sqrt(d[w.row_indices()] * d[w.col_idx])
    return CsrMatrix(w.n_rows, w.n_cols, w.row_ptr, w.col_idx, w.vals / scale)


def recover_row_eigvecs(u: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Map eigenvectors of the symmetric form to eigenvectors of the
    row-scaled operator, renormalizing each column to unit 2-norm."""
    d = _check_positive(d)
    u = np.asarray(u, dtype=np.float64)
    if u.ndim != 2 or u.shape[0] != len(d):
        raise DimensionMismatch(f"eigenvector matrix shape {u.shape} does not match degree length {len(d)}")
    if u.shape[1] == 0:
        return u.copy()
    v = u / np.sqrt(d)[:, None]
    norms = np.linalg.norm(v, axis=0)
    norms[norms == 0.0] = 1.0
    return v / norms
