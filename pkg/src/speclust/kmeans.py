"""k-means clustering: k-means++ seeding and Lloyd iterations.

Point-to-centroid distances use the Gram expansion
``|v|^2 + |c|^2 - 2 v.c`` so the n x k distance matrix comes from one
dense matrix product; tiny negative round-off is clamped to zero.
Iteration stops when the number of label changes drops to the
configured threshold (default 0) or the iteration cap is hit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadConfig, DimensionMismatch

__all__ = [
    "KmeansConfig",
    "Labeling",
    "pairwise_sq_dist",
    "kmeanspp_init",
    "lloyd",
    "kmeans",
]

INIT_KINDS = ("kmeanspp", "random_points")


@dataclass(frozen=True)
class KmeansConfig:
    """``restarts`` > 1 reruns seeding and Lloyd from derived seeds and
    keeps the lowest-SSE result; restart 0 always uses ``seed`` itself,
    so the default single run is unaffected by the knob."""

    k: int
    max_iters: int = 300
    seed: int = 0
    init: str = "kmeanspp"
    tol_changes: int = 0
    restarts: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise BadConfig(f"k must be >= 1, got {self.k}")
        if self.max_iters < 1:
            raise BadConfig(f"max_iters must be >= 1, got {self.max_iters}")
        if self.tol_changes < 0:
            raise BadConfig(f"tol_changes must be >= 0, got {self.tol_changes}")
        if self.init not in INIT_KINDS:
            raise BadConfig(f"unknown init {self.init!r}")
        if self.restarts < 1:
            raise BadConfig(f"restarts must be >= 1, got {self.restarts}")


@dataclass(frozen=True)
class Labeling:
    """Clustering result: per-point labels, centroid matrix, final SSE,
    iterations run, and the SSE recorded after each assignment."""

    labels: np.ndarray
    centroids: np.ndarray
    sse: float
    iters_run: int
    sse_history: np.ndarray

    def __post_init__(self):
        labels = np.ascontiguousarray(self.labels, dtype=np.int64)
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        for name in ("centroids", "sse_history"):
            a = np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            a.flags.writeable = False
            object.__setattr__(self, name, a)


def _as_dense(a, name: str) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got ndim={a.ndim}")
    return a


def pairwise_sq_dist(v: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Squared Euclidean distance from each row of v to each row of c."""
    v = _as_dense(v, "points")
    c = _as_dense(c, "centroids")
    if v.shape[1] != c.shape[1]:
        raise DimensionMismatch(
            f"dimension mismatch: points have d={v.shape[1]}, centroids d={c.shape[1]}"
        )
    vn = np.einsum("ij,ij->i", v, v)
    cn = np.einsum("ij,ij->i", c, c)
    s = vn[:, None] + cn[None, :]
    # einsum (not dgemm) keeps the cross term's reduction order identical
    # to the norm terms, so identical rows give an exact zero
    s -= 2.0 * np.einsum("id,jd->ij", v, c)
    return np.maximum(s, 0.0)


def _sq_dist_to_one(v: np.ndarray, c: np.ndarray) -> np.ndarray:
    # direct differences: exact zeros for coincident points
    diff = v - c
    return np.einsum("ij,ij->i", diff, diff)


def kmeanspp_init(v: np.ndarray, k: int, seed: int) -> np.ndarray:
    """Pick k distinct rows of v: the first uniformly at random, each
    next with probability proportional to its squared distance to the
    nearest centroid chosen so far.

    If every remaining point sits on a chosen centroid, the rest are
    drawn uniformly from the unchosen indices.
    """
    v = _as_dense(v, "points")
    n = v.shape[0]
    if not 1 <= k <= n:
        raise BadConfig(f"k must satisfy 1 <= k <= n, got k={k}, n={n}")
    rng = np.random.default_rng(seed)
    chosen = np.empty(k, dtype=np.int64)
    chosen[0] = rng.integers(n)
    taken = np.zeros(n, dtype=bool)
    taken[chosen[0]] = True
    d2 = _sq_dist_to_one(v, v[chosen[0]])
    for i in range(1, k):
        candidates = np.flatnonzero(~taken & (d2 > 0.0))
        if len(candidates):
            weights = d2[candidates]
            pick = candidates[rng.choice(len(candidates), p=weights / weights.sum())]
        else:
            free = np.flatnonzero(~taken)
            pick = free[rng.integers(len(free))]
        chosen[i] = pick
        taken[pick] = True
        d2 = np.minimum(d2, _sq_dist_to_one(v, v[pick]))
    return v[chosen].copy()


def _update_centroids(
    v: np.ndarray, labels: np.ndarray, k: int, dist_to_assigned: np.ndarray
) -> np.ndarray:
    """Per-cluster means; empty clusters are reseeded to the points
    currently farthest from their assigned centroid."""
    n, d = v.shape
    sums = np.zeros((k, d))
    np.add.at(sums, labels, v)
    counts = np.bincount(labels, minlength=k)
    empty = np.flatnonzero(counts == 0)
    nonempty = counts > 0
    centroids = np.zeros((k, d))
    centroids[nonempty] = sums[nonempty] / counts[nonempty, None]
    if len(empty):
        farthest = np.argsort(-dist_to_assigned, kind="stable")
        for slot, cluster in enumerate(empty):
            centroids[cluster] = v[farthest[slot]]
    return centroids


def lloyd(v: np.ndarray, init_c: np.ndarray, cfg: KmeansConfig) -> Labeling:
    """Lloyd iterations from the given initial centroids.

    Assignment breaks ties toward the lower centroid index; centroids
    are accumulated per cluster in point order, so results do not depend
    on any caller-side parallelism.
    """
    v = _as_dense(v, "points")
    c = _as_dense(init_c, "centroids")
    if v.shape[1] != c.shape[1]:
        raise DimensionMismatch(
            f"dimension mismatch: points have d={v.shape[1]}, centroids d={c.shape[1]}"
        )
    k = c.shape[0]
    n = v.shape[0]
    s = pairwise_sq_dist(v, c)
    labels = np.argmin(s, axis=1)
    point_cost = s[np.arange(n), labels]
    history = [float(point_cost.sum())]
    iters = 0
    while iters < cfg.max_iters:
        c = _update_centroids(v, labels, k, point_cost)
        s = pairwise_sq_dist(v, c)
        new_labels = np.argmin(s, axis=1)
        point_cost = s[np.arange(n), new_labels]
        history.append(float(point_cost.sum()))
        iters += 1
        changes = int(np.count_nonzero(new_labels != labels))
        labels = new_labels
        if changes <= cfg.tol_changes:
            break
    return Labeling(
        labels=labels,
        centroids=c,
        sse=history[-1],
        iters_run=iters,
        sse_history=np.array(history),
    )


def _run_once(v: np.ndarray, cfg: KmeansConfig, seed) -> Labeling:
    n = v.shape[0]
    if cfg.init == "kmeanspp":
        init_c = kmeanspp_init(v, cfg.k, seed)
    else:
        rng = np.random.default_rng(seed)
        init_c = v[rng.choice(n, size=cfg.k, replace=False)].copy()
    return lloyd(v, init_c, cfg)


def kmeans(v: np.ndarray, cfg: KmeansConfig) -> Labeling:
    """k-means++ (or uniform distinct-row) seeding followed by Lloyd
    iterations, best of ``cfg.restarts`` runs by SSE; deterministic for
    a fixed seed."""
    v = _as_dense(v, "points")
    if cfg.k > v.shape[0]:
        raise BadConfig(f"k={cfg.k} exceeds number of points n={v.shape[0]}")
    best = _run_once(v, cfg, cfg.seed)
    for r in range(1, cfg.restarts):
        seed = int(np.random.SeedSequence([cfg.seed, r]).generate_state(1)[0])
        candidate = _run_once(v, cfg, seed)
        if candidate.sse < best.sse:
            best = candidate
    return best
