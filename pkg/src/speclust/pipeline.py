"""End-to-end spectral clustering: graph, degrees, eigensolve, k-means.

Stages: (1) build or load the similarity matrix W; (2) compute degrees
and apply the isolated-node policy; (3) take the top-k eigenpairs of the
symmetrically normalized operator and map them back to row-scaled
eigenvectors; (4) k-means on the embedding rows; (5) quality metrics.
Every stage is timed and failures carry their stage tag.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import io
from .errors import (
    BadConfig,
    MaxRestartsExceeded,
    EigenNotConverged,
    NotSymmetric,
    PipelineError,
)
from .eigen import EigenBasis, LanczosConfig, eigensolve
from .graph import (
    SimilarityMeasure,
    as_points,
    build_edges_eps,
    build_edges_knn,
    build_edges_threshold,
    build_similarity,
)
from .kmeans import KmeansConfig, Labeling, kmeans
from .laplacian import degrees, handle_isolated, recover_row_eigvecs, sym_scale
from .metrics import ncut
from .sparse import CooMatrix, CsrMatrix, coo_canonicalize, coo_to_csr, is_symmetric

__all__ = [
    "PointsInput",
    "MatrixInput",
    "EdgesInput",
    "PipelineConfig",
    "ClusterReport",
    "run",
]

GRAPH_PATTERNS = ("eps", "knn", "threshold", "edges")


@dataclass(frozen=True)
class PointsInput:
    """Build W from points (in memory or a points file) using one of the
    sparsity patterns and a similarity measure. Pattern "edges" skips
    neighbor search and weights a given edge list instead."""

    measure: SimilarityMeasure
    pattern: str
    points: np.ndarray | None = None
    path: str | None = None
    eps: float | None = None
    knn: int | None = None
    threshold: float | None = None
    edges: np.ndarray | None = None
    edges_path: str | None = None

    def __post_init__(self):
        if self.pattern not in GRAPH_PATTERNS:
            raise BadConfig(f"unknown graph pattern {self.pattern!r}")
        if (self.points is None) == (self.path is None):
            raise BadConfig("exactly one of points or path must be given")
        if self.pattern == "edges":
            if self.edges is None and self.edges_path is None:
                raise BadConfig('pattern "edges" requires an edge list')
        else:
            needed = {"eps": self.eps, "knn": self.knn, "threshold": self.threshold}[self.pattern]
            if needed is None:
                raise BadConfig(f"pattern {self.pattern!r} requires its parameter")


@dataclass(frozen=True)
class MatrixInput:
    """Use an existing similarity matrix (in memory or a matrix file)."""

    matrix: CooMatrix | CsrMatrix | None = None
    path: str | None = None

    def __post_init__(self):
        if (self.matrix is None) == (self.path is None):
            raise BadConfig("exactly one of matrix or path must be given")


@dataclass(frozen=True)
class EdgesInput:
    """Use a bare graph given as an edge list; every edge gets weight 1.
    ``n`` defaults to one past the highest node index mentioned."""

    edges: np.ndarray | None = None
    path: str | None = None
    n: int | None = None

    def __post_init__(self):
        if (self.edges is None) == (self.path is None):
            raise BadConfig("exactly one of edges or path must be given")


@dataclass(frozen=True)
class PipelineConfig:
    input: PointsInput | MatrixInput
    k_clusters: int
    eigen: LanczosConfig | None = None
    kmeans: KmeansConfig | None = None
    isolated_policy: str = "error"
    negative_policy: str = "clamp_zero"
    normalize_rows: bool = False

    def __post_init__(self):
        if self.k_clusters < 2:
            raise BadConfig(f"k_clusters must be >= 2, got {self.k_clusters}")
        if self.isolated_policy not in ("error", "remove"):
            raise BadConfig(f"unknown isolated_policy {self.isolated_policy!r}")
        if self.eigen is not None and self.eigen.k != self.k_clusters:
            raise BadConfig(
                f"eigen config requests k={self.eigen.k} but k_clusters={self.k_clusters}"
            )
        if self.kmeans is not None and self.kmeans.k != self.k_clusters:
            raise BadConfig(
                f"kmeans config requests k={self.kmeans.k} but k_clusters={self.k_clusters}"
            )


@dataclass(frozen=True)
class ClusterReport:
    """Pipeline output: the clustering, the eigenvalues used for the
    embedding, the normalized-cut value of the result on the clustered
    W, per-stage timings in seconds, and any warnings. ``index_map``
    maps original node index to clustered index (-1 if removed)."""

    labeling: Labeling
    eigenvalues: np.ndarray
    eigen_residuals: np.ndarray
    ncut_value: float
    timings: dict[str, float]
    warnings: list[str] = field(default_factory=list)
    index_map: np.ndarray | None = None


class _StageTimer:
    def __init__(self):
        self.timings: dict[str, float] = {}
        self._stage = None
        self._start = 0.0

    def stage(self, name: str):
        self._stage = name
        self._start = time.perf_counter()
        return self

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        self.timings[self._stage] = time.perf_counter() - self._start
        if exc is not None and not isinstance(exc, PipelineError):
            raise PipelineError(self._stage, exc) from exc
        return False


def _unit_weight_graph(edges: np.ndarray, n: int | None) -> CsrMatrix:
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if n is None:
        n = int(edges.max()) + 1 if len(edges) else 0
    rows = np.concatenate((edges[:, 0], edges[:, 1]))
    cols = np.concatenate((edges[:, 1], edges[:, 0]))
    coo = coo_canonicalize(
        CooMatrix(n, n, rows, cols, np.ones(len(rows))), dup_policy="error"
    )
    return coo_to_csr(coo)


def _resolve_graph(cfg: PipelineConfig, warnings: list[str]) -> CsrMatrix:
    src = cfg.input
    if isinstance(src, MatrixInput):
        coo = src.matrix if src.matrix is not None else io.load_matrix(src.path)
        if isinstance(coo, CsrMatrix):
            w = coo
        else:
            w = coo_to_csr(coo_canonicalize(coo))
    elif isinstance(src, EdgesInput):
        edges = src.edges if src.edges is not None else io.load_edges(src.path)
        w = _unit_weight_graph(edges, src.n)
    else:
        pts = src.points if src.points is not None else io.load_points(src.path)
        pts = as_points(pts)
        if src.pattern == "eps":
            edges = build_edges_eps(pts, src.eps)
        elif src.pattern == "knn":
            edges = build_edges_knn(pts, src.knn, src.measure)
        elif src.pattern == "edges":
            edges = src.edges if src.edges is not None else io.load_edges(src.edges_path)
        else:
            edges = build_edges_threshold(pts, src.threshold, src.measure)
        w = coo_to_csr(build_similarity(pts, edges, src.measure, cfg.negative_policy))
    if not is_symmetric(w):
        raise NotSymmetric("similarity matrix must be symmetric")
    if w.nnz and w.vals.min() < 0.0:
        warnings.append("similarity matrix contains negative weights")
    return w


def run(cfg: PipelineConfig) -> ClusterReport:
    """Execute the full pipeline; deterministic given the seeds in the
    eigen and k-means configs."""
    timer = _StageTimer()
    warnings: list[str] = []

    with timer.stage("graph"):
        w = _resolve_graph(cfg, warnings)

    with timer.stage("degrees"):
        deg = degrees(w)
        w_used, deg_used, index_map = handle_isolated(w, deg, cfg.isolated_policy)
        removed = int(np.count_nonzero(index_map < 0))
        if removed:
            warnings.append(f"removed {removed} isolated nodes")
        if w_used.n_rows < cfg.k_clusters:
            raise BadConfig(
                f"graph has {w_used.n_rows} usable nodes but k_clusters={cfg.k_clusters}"
            )

    with timer.stage("eigen"):
        eigen_cfg = cfg.eigen if cfg.eigen is not None else LanczosConfig(k=cfg.k_clusters)
        sym = sym_scale(w_used, deg_used)
        try:
            basis: EigenBasis = eigensolve(sym, eigen_cfg)
        except MaxRestartsExceeded as e:
            raise EigenNotConverged(e) from e
        embedding = recover_row_eigvecs(basis.vectors, deg_used)

    with timer.stage("kmeans"):
        rows = embedding
        if cfg.normalize_rows:
            norms = np.linalg.norm(rows, axis=1, keepdims=True)
            norms[norms == 0.0] = 1.0
            rows = rows / norms
        km_cfg = cfg.kmeans if cfg.kmeans is not None else KmeansConfig(k=cfg.k_clusters)
        labeling: Labeling = kmeans(rows, km_cfg)

    with timer.stage("metrics"):
        occupied = len(np.unique(labeling.labels))
        if occupied < cfg.k_clusters:
            warnings.append(
                f"clustering occupies {occupied} of {cfg.k_clusters} clusters"
            )
        # ncut over occupied parts; label compaction keeps it well-defined
        _, compact = np.unique(labeling.labels, return_inverse=True)
        ncut_value = ncut(w_used, compact)

    return ClusterReport(
        labeling=labeling,
        eigenvalues=basis.values,
        eigen_residuals=basis.residuals,
        ncut_value=ncut_value,
        timings=timer.timings,
        warnings=warnings,
        index_map=index_map,
    )
