"""Sparse similarity-graph construction from point data.

Supports three similarity measures (cosine, cross-correlation, Gaussian
exponential decay) and three sparsity patterns (epsilon-distance,
k-nearest-neighbor with union semantics, similarity threshold).
Neighbor search is a plain O(n^2) pairwise scan.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateVector, DimensionMismatch, InvalidFormat
from .sparse import CooMatrix, coo_canonicalize

__all__ = [
    "SimilarityMeasure",
    "similarity",
    "build_edges_eps",
    "build_edges_knn",
    "build_edges_threshold",
    "build_similarity",
    "validate_edges",
]

MEASURE_KINDS = ("cosine", "cross_correlation", "exp_decay")
NEGATIVE_POLICIES = ("clamp_zero", "abs", "keep")


@dataclass(frozen=True)
class SimilarityMeasure:
    """Similarity measure selector; ``sigma`` is the Gaussian width for
    ``exp_decay`` and ignored otherwise."""

    kind: str
    sigma: float | None = None

    def __post_init__(self):
        if self.kind not in MEASURE_KINDS:
            raise ValueError(f"unknown measure kind {self.kind!r}")
        if self.kind == "exp_decay":
            if self.sigma is None or not self.sigma > 0:
                raise ValueError("exp_decay requires sigma > 0")

    @classmethod
    def cosine(cls) -> "SimilarityMeasure":
        return cls("cosine")

    @classmethod
    def cross_correlation(cls) -> "SimilarityMeasure":
        return cls("cross_correlation")

    @classmethod
    def exp_decay(cls, sigma: float) -> "SimilarityMeasure":
        return cls("exp_decay", sigma)


def as_points(x) -> np.ndarray:
    """Coerce and validate an n x d point matrix."""
    a = np.ascontiguousarray(x, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise InvalidFormat("point matrix must be 2-D with n >= 1, d >= 1")
    if not np.all(np.isfinite(a)):
        raise InvalidFormat("point matrix must be finite")
    return a


def validate_edges(pairs, n: int) -> np.ndarray:
    """Coerce an edge list to (m, 2) int64 and check its invariants:
    no self-loops, indices < n, no duplicate unordered pair."""
    e = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if len(e):
        if e.min() < 0 or e.max() >= n:
            raise InvalidFormat("edge index out of range")
        if np.any(e[:, 0] == e[:, 1]):
            raise InvalidFormat("edge list contains a self-loop")
        lo = np.minimum(e[:, 0], e[:, 1])
        hi = np.maximum(e[:, 0], e[:, 1])
        key = lo * n + hi
        if len(np.unique(key)) != len(key):
            raise InvalidFormat("edge list contains a duplicate unordered pair")
    return e


def _center(x: np.ndarray) -> np.ndarray:
    return x - x.mean(axis=1, keepdims=True)


def _sq_norms(x: np.ndarray) -> np.ndarray:
    return np.einsum("ij,ij->i", x, x)


def _check_nondegenerate(sq: np.ndarray, kind: str, involved: np.ndarray | None = None):
    idx = np.flatnonzero(sq == 0.0)
    if involved is not None:
        idx = idx[np.isin(idx, involved)]
    if len(idx):
        what = "constant" if kind == "cross_correlation" else "zero"
        raise DegenerateVector(
            f"{what} vector at point index {idx[0]} is invalid for {kind}",
            index=int(idx[0]),
        )


def similarity(x_i, x_j, m: SimilarityMeasure) -> float:
    """Similarity between two d-vectors under measure ``m``.

    The formulas are evaluated symmetrically, so swapping the arguments
    returns the bit-identical result.
    """
    a = np.asarray(x_i, dtype=np.float64)
    b = np.asarray(x_j, dtype=np.float64)
    if a.ndim != 1 or a.shape != b.shape:
        raise DimensionMismatch(f"vectors must be 1-D of equal length, got {a.shape} and {b.shape}")
    if a.shape[0] < 1:
        raise DimensionMismatch("vectors must have d >= 1")
    if m.kind == "exp_decay":
        d2 = float(np.sum((a - b) ** 2))
        return float(np.exp(-d2 / (2.0 * m.sigma**2)))
    if m.kind == "cross_correlation":
        a = a - a.mean()
        b = b - b.mean()
    sa = float(a @ a)
    sb = float(b @ b)
    if sa == 0.0:
        raise DegenerateVector(f"left vector is degenerate for {m.kind}", index=None)
    if sb == 0.0:
        raise DegenerateVector(f"right vector is degenerate for {m.kind}", index=None)
    # divide by sqrt(sa*sb) rather than norm(a)*norm(b): symmetric, and
    # identical vectors give exactly 1.0
    return float(np.clip((a @ b) / np.sqrt(sa * sb), -1.0, 1.0))


def _edge_similarities(x: np.ndarray, e: np.ndarray, m: SimilarityMeasure) -> np.ndarray:
    """Similarity value per edge, one evaluation per unordered pair."""
    ei, ej = e[:, 0], e[:, 1]
    if m.kind == "exp_decay":
        d2 = _sq_norms(x[ei] - x[ej])
        return np.exp(-d2 / (2.0 * m.sigma**2))
    xc = _center(x) if m.kind == "cross_correlation" else x
    sq = _sq_norms(xc)
    _check_nondegenerate(sq, m.kind, involved=np.unique(e))
    dots = np.einsum("ij,ij->i", xc[ei], xc[ej])
    return np.clip(dots / np.sqrt(sq[ei] * sq[ej]), -1.0, 1.0)


def _similarity_matrix(x: np.ndarray, m: SimilarityMeasure) -> np.ndarray:
    """Full n x n similarity matrix (diagonal not meaningful to callers)."""
    n = x.shape[0]
    if m.kind == "exp_decay":
        s = np.empty((n, n))
        inv = -1.0 / (2.0 * m.sigma**2)
        for i in range(n):
            s[i] = np.exp(inv * _sq_norms(x - x[i]))
        return s
    xc = _center(x) if m.kind == "cross_correlation" else x
    sq = _sq_norms(xc)
    _check_nondegenerate(sq, m.kind)
    s = xc @ xc.T
    s /= np.sqrt(np.outer(sq, sq))
    return np.clip(s, -1.0, 1.0)


def build_edges_eps(x, eps: float) -> np.ndarray:
    """Pairs (i, j), i < j, with Euclidean distance at most ``eps``."""
    x = as_points(x)
    if not eps > 0:
        raise ValueError("eps must be positive")
    n = x.shape[0]
    eps2 = eps * eps
    out_i, out_j = [], []
    for i in range(n - 1):
        d2 = _sq_norms(x[i + 1 :] - x[i])
        hits = np.flatnonzero(d2 <= eps2)
        if len(hits):
            out_i.append(np.full(len(hits), i, dtype=np.int64))
            out_j.append(hits + i + 1)
    if not out_i:
        return np.empty((0, 2), dtype=np.int64)
    return np.column_stack((np.concatenate(out_i), np.concatenate(out_j)))


def build_edges_knn(x, knn: int, m: SimilarityMeasure) -> np.ndarray:
    """Union k-nearest-neighbor pattern: pair (i, j) is kept when j ranks
    among the ``knn`` most similar points of i, or vice versa.

    Ties at the knn-th rank are broken toward the lower point index.
    """
    x = as_points(x)
    n = x.shape[0]
    if not 1 <= knn < n:
        raise ValueError(f"knn must satisfy 1 <= knn < n, got {knn} for n={n}")
    s = _similarity_matrix(x, m)
    selected = np.zeros((n, n), dtype=bool)
    idx = np.arange(n)
    for i in range(n):
        cand = np.delete(idx, i)
        # descending similarity, ascending index on ties
        order = np.lexsort((cand, -s[i, cand]))
        selected[i, cand[order[:knn]]] = True
    und = np.triu(selected | selected.T, 1)
    return np.argwhere(und).astype(np.int64)


def build_edges_threshold(x, lam: float, m: SimilarityMeasure) -> np.ndarray:
    """Pairs (i, j), i < j, whose similarity strictly exceeds ``lam``."""
    x = as_points(x)
    s = _similarity_matrix(x, m)
    return np.argwhere(np.triu(s > lam, 1)).astype(np.int64)


def build_similarity(
    x, e, m: SimilarityMeasure, negative_policy: str = "clamp_zero"
) -> CooMatrix:
    """Symmetric n x n similarity matrix over the given edge pattern.

    Each unordered edge is evaluated once and emitted as two mirrored
    entries carrying the identical value; no diagonal entries are
    produced. ``negative_policy`` maps negative similarities: clamp_zero
    (default), abs, or keep.
    """
    x = as_points(x)
    n = x.shape[0]
    e = validate_edges(e, n)
    if negative_policy not in NEGATIVE_POLICIES:
        raise ValueError(f"unknown negative_policy {negative_policy!r}")
    vals = _edge_similarities(x, e, m)
    if negative_policy == "clamp_zero":
        vals = np.maximum(vals, 0.0)
    elif negative_policy == "abs":
        vals = np.abs(vals)
    rows = np.concatenate((e[:, 0], e[:, 1]))
    cols = np.concatenate((e[:, 1], e[:, 0]))
    both = np.concatenate((vals, vals))
    return coo_canonicalize(CooMatrix(n, n, rows, cols, both), dup_policy="error")
