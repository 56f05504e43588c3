"""Spectral clustering toolkit.

Sparse similarity-graph construction, a restarted Lanczos eigensolver
behind a reverse-communication interface, k-means++ clustering, a
stochastic-block-model benchmark generator, and graph-cut quality
metrics, composable as a library or through the ``speclust`` CLI.
"""

from . import errors
from .eigen import EigenBasis, LanczosConfig, eigensolve, rci_advance, rci_extract, rci_new
from .graph import (
    SimilarityMeasure,
    build_edges_eps,
    build_edges_knn,
    build_edges_threshold,
    build_similarity,
    similarity,
)
from .kmeans import KmeansConfig, Labeling, kmeans, kmeanspp_init, lloyd, pairwise_sq_dist
from .laplacian import degrees, handle_isolated, recover_row_eigvecs, row_scale, sym_scale
from .metrics import adjusted_rand_index, cut, ncut, ratio_cut
from .pipeline import ClusterReport, EdgesInput, MatrixInput, PipelineConfig, PointsInput, run
from .sbm import SbmConfig, sbm_generate
from .sparse import CooMatrix, CsrMatrix, coo_canonicalize, coo_to_csr, csr_to_coo, spmv

__version__ = "0.1.0"

__all__ = [
    "errors",
    "CooMatrix",
    "CsrMatrix",
    "coo_canonicalize",
    "coo_to_csr",
    "csr_to_coo",
    "spmv",
    "SimilarityMeasure",
    "similarity",
    "build_edges_eps",
    "build_edges_knn",
    "build_edges_threshold",
    "build_similarity",
    "degrees",
    "handle_isolated",
    "row_scale",
    "sym_scale",
    "recover_row_eigvecs",
    "LanczosConfig",
    "EigenBasis",
    "rci_new",
    "rci_advance",
    "rci_extract",
    "eigensolve",
    "KmeansConfig",
    "Labeling",
    "pairwise_sq_dist",
    "kmeanspp_init",
    "lloyd",
    "kmeans",
    "SbmConfig",
    "sbm_generate",
    "cut",
    "ratio_cut",
    "ncut",
    "adjusted_rand_index",
    "PointsInput",
    "MatrixInput",
    "EdgesInput",
    "PipelineConfig",
    "ClusterReport",
    "run",
]
