"""Partition quality measures on weighted graphs, plus Adjusted Rand Index.

Cut-style objectives take the symmetric weight matrix and a label
vector. Parts may be empty for ``cut`` (contributing nothing); the
normalized objectives reject empty or zero-volume parts since they
divide by part size or volume. Self-loops count toward volume but never
toward the cut.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, EmptyPart, ZeroVolumePart
from .sparse import CsrMatrix

__all__ = ["cut", "ratio_cut", "ncut", "adjusted_rand_index"]


def _as_labels(labels, n: int, k: int | None) -> tuple[np.ndarray, int]:
    lab = np.asarray(labels, dtype=np.int64)
    if lab.shape != (n,):
        raise DimensionMismatch(f"labels shape {lab.shape} does not match n={n}")
    if len(lab) and lab.min() < 0:
        raise DimensionMismatch("labels must be nonnegative")
    nparts = int(lab.max()) + 1 if len(lab) else 0
    if k is None:
        k = nparts
    elif nparts > k:
        raise DimensionMismatch(f"label {nparts - 1} out of range for k={k}")
    return lab, k


def _boundary_weights(w: CsrMatrix, lab: np.ndarray, k: int) -> np.ndarray:
    """Per-part boundary weight: sum of w[i, j] with i in the part and j
    outside it (each direction of an edge counted toward its own row)."""
    rows = w.row_indices()
    crossing = lab[rows] != lab[w.col_idx]
    return np.bincount(lab[rows[crossing]], weights=w.vals[crossing], minlength=k)


def cut(w: CsrMatrix, labels, k: int | None = None) -> float:
    """Total weight of edges between different parts, each unordered
    edge counted once."""
    lab, k = _as_labels(labels, w.n_rows, k)
    crossing = lab[w.row_indices()] != lab[w.col_idx]
    return 0.5 * float(w.vals[crossing].sum())


def ratio_cut(w: CsrMatrix, labels, k: int | None = None) -> float:
    """Half the sum over parts of boundary weight divided by part size."""
    lab, k = _as_labels(labels, w.n_rows, k)
    sizes = np.bincount(lab, minlength=k)
    if np.any(sizes == 0):
        raise EmptyPart(f"empty part {int(np.flatnonzero(sizes == 0)[0])}")
    return 0.5 * float((_boundary_weights(w, lab, k) / sizes).sum())


def ncut(w: CsrMatrix, labels, k: int | None = None) -> float:
    """Half the sum over parts of boundary weight divided by part volume
    (sum of member degrees)."""
    lab, k = _as_labels(labels, w.n_rows, k)
    deg = np.bincount(w.row_indices(), weights=w.vals, minlength=w.n_rows)
    vol = np.bincount(lab, weights=deg, minlength=k)
    if np.any(vol <= 0.0):
        raise ZeroVolumePart(f"part {int(np.flatnonzero(vol <= 0.0)[0])} has zero volume")
    return 0.5 * float((_boundary_weights(w, lab, k) / vol).sum())


def adjusted_rand_index(a, b) -> float:
    """Chance-corrected agreement between two labelings, in [-1, 1];
    equals 1 exactly when the partitions match up to relabeling."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionMismatch(f"label arrays differ in shape: {a.shape} vs {b.shape}")
    n = len(a)
    if n == 0:
        return 1.0
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    ka = int(ai.max()) + 1
    kb = int(bi.max()) + 1
    contingency = np.bincount(ai * kb + bi, minlength=ka * kb).reshape(ka, kb)

    def comb2(x):
        x = x.astype(np.float64)
        return x * (x - 1.0) / 2.0

    sum_cells = comb2(contingency).sum()
    sum_rows = comb2(contingency.sum(axis=1)).sum()
    sum_cols = comb2(contingency.sum(axis=0)).sum()
    total = n * (n - 1.0) / 2.0
    expected = sum_rows * sum_cols / total if total > 0 else 0.0
    max_index = 0.5 * (sum_rows + sum_cols)
    if max_index == expected:
        # both partitions trivial (all singletons or a single cluster)
        return 1.0
    return float((sum_cells - expected) / (max_index - expected))
