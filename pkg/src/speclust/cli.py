"""Command-line interface: one subcommand per pipeline stage plus the
full pipeline, with deterministic seeds and per-stage timing output.

Timings are printed as a final machine-readable block of
``stage_<name>_ms=<value>`` lines. Numeric output uses full precision so
files round-trip bit-exactly.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .errors import SpeclustError
from .eigen import LanczosConfig, eigensolve
from .graph import SimilarityMeasure
from .kmeans import KmeansConfig, kmeans
from .laplacian import degrees, handle_isolated, recover_row_eigvecs, sym_scale
from .metrics import adjusted_rand_index, cut, ncut, ratio_cut
from .pipeline import EdgesInput, MatrixInput, PipelineConfig, PointsInput, run
from .sbm import SbmConfig, sbm_generate
from .sparse import coo_to_csr, is_symmetric

MEASURE_NAMES = {
    "cosine": "cosine",
    "cross-correlation": "cross_correlation",
    "exp-decay": "exp_decay",
}


def _fmt(v: float) -> str:
    return repr(float(v))


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _block_sizes(text: str) -> tuple[int, ...]:
    try:
        sizes = tuple(int(t) for t in text.split(",") if t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad block list {text!r}")
    if not sizes:
        raise argparse.ArgumentTypeError("block list is empty")
    return sizes


def _measure_from(name: str | None, sigma: float | None) -> SimilarityMeasure:
    if name is None:
        raise SpeclustError("a similarity measure is required when building from points")
    return SimilarityMeasure(MEASURE_NAMES[name], sigma)


def _add_common(p: argparse.ArgumentParser):
    p.add_argument(
        "--threads",
        type=_positive_int,
        default=1,
        help="upper bound on worker threads; every stage currently runs "
        "single-worker, so results never depend on this value",
    )


def _print_timings(timings: dict[str, float]):
    for stage, seconds in timings.items():
        print(f"stage_{stage}_ms={_fmt(seconds * 1000.0)}")


def _cmd_gen_sbm(args) -> int:
    cfg = SbmConfig(args.blocks, args.p_in, args.p_out, args.seed)
    adj, labels = sbm_generate(cfg)
    io.save_matrix(args.out_matrix, adj)
    io.save_labels(args.out_labels, labels)
    print(f"nodes={adj.n_rows}")
    print(f"nnz={adj.nnz}")
    return 0


def _cmd_build_graph(args) -> int:
    points = io.load_points(args.points)
    measure = _measure_from(args.measure, args.sigma)
    from .graph import build_edges_eps, build_edges_knn, build_edges_threshold, build_similarity

    if args.pattern == "eps":
        if args.eps is None:
            raise SpeclustError("pattern eps requires --eps")
        edges = build_edges_eps(points, args.eps)
    elif args.pattern == "knn":
        if args.knn is None:
            raise SpeclustError("pattern knn requires --knn")
        edges = build_edges_knn(points, args.knn, measure)
    elif args.pattern == "edges":
        if args.edges is None:
            raise SpeclustError("pattern edges requires --edges")
        edges = io.load_edges(args.edges)
    else:
        if args.threshold is None:
            raise SpeclustError("pattern threshold requires --threshold")
        edges = build_edges_threshold(points, args.threshold, measure)
    w = build_similarity(points, edges, measure, args.negative_policy)
    io.save_matrix(args.out, w)
    print(f"nodes={w.n_rows}")
    print(f"edges={len(edges)}")
    print(f"nnz={w.nnz}")
    return 0


def _cmd_eigensolve(args) -> int:
    w = coo_to_csr(io.load_matrix(args.matrix))
    if not is_symmetric(w):
        raise SpeclustError("matrix must be symmetric")
    deg = degrees(w)
    w_used, deg_used, _ = handle_isolated(w, deg, args.isolated_policy)
    cfg = LanczosConfig(
        k=args.k, m=args.m, tol=args.tol, max_restarts=args.max_restarts, seed=args.seed
    )
    basis = eigensolve(sym_scale(w_used, deg_used), cfg)
    embedding = recover_row_eigvecs(basis.vectors, deg_used)
    io.save_dense(args.out_vectors, embedding)
    for i, v in enumerate(basis.values):
        print(f"eigenvalue_{i}={_fmt(v)}")
    for i, r in enumerate(basis.residuals):
        print(f"residual_{i}={_fmt(r)}")
    return 0


def _cmd_kmeans(args) -> int:
    data = io.load_dense(args.data)
    cfg = KmeansConfig(
        k=args.k,
        max_iters=args.max_iters,
        seed=args.seed,
        init=args.init,
        tol_changes=args.tol_changes,
        restarts=args.restarts,
    )
    labeling = kmeans(data, cfg)
    io.save_labels(args.out_labels, labeling.labels)
    print(f"sse={_fmt(labeling.sse)}")
    print(f"iters={labeling.iters_run}")
    return 0


_CLUSTER_DEFAULTS = {
    "pattern": "eps",
    "negative_policy": "clamp_zero",
    "isolated_policy": "error",
    "tol": 1e-8,
    "max_restarts": 300,
    "eigen_seed": 0,
    "kmeans_seed": 0,
    "init": "kmeanspp",
    "max_iters": 300,
    "tol_changes": 0,
    "kmeans_restarts": 1,
    "normalize_rows": False,
}

_CLUSTER_INT_KEYS = ("k", "knn", "n", "m", "max_restarts", "eigen_seed", "kmeans_seed", "max_iters", "tol_changes", "kmeans_restarts")
_CLUSTER_FLOAT_KEYS = ("eps", "threshold", "sigma", "tol")
_CLUSTER_BOOL_KEYS = ("normalize_rows",)


def _load_config_file(path) -> dict:
    values = {}
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise SpeclustError(f"{path}:{lineno}: expected key=value")
            key, _, raw = line.partition("=")
            key = key.strip().replace("-", "_")
            raw = raw.strip()
            if key in _CLUSTER_INT_KEYS:
                values[key] = int(raw)
            elif key in _CLUSTER_FLOAT_KEYS:
                values[key] = float(raw)
            elif key in _CLUSTER_BOOL_KEYS:
                values[key] = raw.lower() in ("1", "true", "yes")
            else:
                values[key] = raw
    return values


def _cmd_cluster(args) -> int:
    merged = dict(_CLUSTER_DEFAULTS)
    if args.config:
        merged.update(_load_config_file(args.config))
    for key, value in vars(args).items():
        if key in ("command", "config", "func", "threads"):
            continue
        if value is not None:
            merged[key] = value

    def get(key, default=None):
        return merged.get(key, default)

    if get("k") is None:
        raise SpeclustError("--k is required")
    if get("out_labels") is None:
        raise SpeclustError("--out-labels is required")
    given = [key for key in ("matrix", "points", "edges") if get(key) is not None]
    if len(given) > 1:
        raise SpeclustError(f"give exactly one input, got --{' --'.join(given)}")
    if get("matrix") is not None:
        source = MatrixInput(path=get("matrix"))
    elif get("edges") is not None:
        source = EdgesInput(path=get("edges"), n=get("n"))
    elif get("points") is not None:
        measure = _measure_from(get("measure"), get("sigma"))
        source = PointsInput(
            measure=measure,
            pattern=get("pattern"),
            path=get("points"),
            eps=get("eps"),
            knn=get("knn"),
            threshold=get("threshold"),
            edges_path=get("pattern_edges"),
        )
    else:
        raise SpeclustError("an input is required: --matrix, --points, or --edges")

    k = int(get("k"))
    cfg = PipelineConfig(
        input=source,
        k_clusters=k,
        eigen=LanczosConfig(
            k=k,
            m=get("m"),
            tol=float(get("tol")),
            max_restarts=int(get("max_restarts")),
            seed=int(get("eigen_seed")),
        ),
        kmeans=KmeansConfig(
            k=k,
            max_iters=int(get("max_iters")),
            seed=int(get("kmeans_seed")),
            init=get("init"),
            tol_changes=int(get("tol_changes")),
            restarts=int(get("kmeans_restarts")),
        ),
        isolated_policy=get("isolated_policy"),
        negative_policy=get("negative_policy"),
        normalize_rows=bool(get("normalize_rows")),
    )
    report = run(cfg)
    io.save_labels(get("out_labels"), report.labeling.labels)
    for i, v in enumerate(report.eigenvalues):
        print(f"eigenvalue_{i}={_fmt(v)}")
    for w in report.warnings:
        print(f"warning={w}")
    print(f"ncut={_fmt(report.ncut_value)}")
    print(f"sse={_fmt(report.labeling.sse)}")
    print(f"kmeans_iters={report.labeling.iters_run}")
    _print_timings(report.timings)
    return 0


def _cmd_eval(args) -> int:
    w = coo_to_csr(io.load_matrix(args.matrix))
    if not is_symmetric(w):
        raise SpeclustError("matrix must be symmetric")
    raw = io.load_labels(args.labels)
    if len(raw) != w.n_rows:
        raise SpeclustError(f"labels file has {len(raw)} entries for {w.n_rows} nodes")
    _, labels = np.unique(raw, return_inverse=True)
    print(f"cut={_fmt(cut(w, labels))}")
    print(f"ratiocut={_fmt(ratio_cut(w, labels))}")
    print(f"ncut={_fmt(ncut(w, labels))}")
    if args.truth:
        truth = io.load_labels(args.truth)
        print(f"ari={_fmt(adjusted_rand_index(truth, raw))}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="speclust",
        description="Spectral clustering toolkit: similarity graphs, "
        "Lanczos eigensolver, k-means, SBM benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-sbm", help="generate a planted-partition benchmark graph")
    p.add_argument("--blocks", type=_block_sizes, required=True, help="comma-separated block sizes")
    p.add_argument("--p-in", type=float, required=True)
    p.add_argument("--p-out", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-matrix", required=True)
    p.add_argument("--out-labels", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_gen_sbm)

    p = sub.add_parser("build-graph", help="build a similarity matrix from points")
    p.add_argument("--points", required=True)
    p.add_argument("--pattern", choices=("eps", "knn", "threshold", "edges"), default="eps")
    p.add_argument("--edges", help="edge-list file for --pattern edges")
    p.add_argument("--eps", type=float)
    p.add_argument("--knn", type=int)
    p.add_argument("--threshold", type=float)
    p.add_argument("--measure", choices=sorted(MEASURE_NAMES), required=True)
    p.add_argument("--sigma", type=float)
    p.add_argument("--negative-policy", choices=("clamp_zero", "abs", "keep"), default="clamp_zero")
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_build_graph)

    p = sub.add_parser(
        "eigensolve",
        help="top-k eigenpairs of the normalized operator of a similarity matrix",
    )
    p.add_argument("--matrix", required=True)
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-restarts", type=int, default=300)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--isolated-policy", choices=("error", "remove"), default="error")
    p.add_argument("--out-vectors", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_eigensolve)

    p = sub.add_parser("kmeans", help="cluster the rows of a dense matrix")
    p.add_argument("--data", required=True)
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--init", choices=("kmeanspp", "random_points"), default="kmeanspp")
    p.add_argument("--max-iters", type=_positive_int, default=300)
    p.add_argument("--tol-changes", type=int, default=0)
    p.add_argument("--restarts", type=_positive_int, default=1)
    p.add_argument("--out-labels", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_kmeans)

    p = sub.add_parser("cluster", help="run the full spectral clustering pipeline")
    p.add_argument("--config", help="key=value file mirroring the flags below")
    p.add_argument("--matrix")
    p.add_argument("--edges", help="edge-list file; nodes get unit-weight edges")
    p.add_argument("--n", type=int, help="node count when --edges is given")
    p.add_argument("--points")
    p.add_argument("--pattern", choices=("eps", "knn", "threshold", "edges"))
    p.add_argument("--pattern-edges", dest="pattern_edges",
                   help="edge-list file for --points with --pattern edges")
    p.add_argument("--eps", type=float)
    p.add_argument("--knn", type=int)
    p.add_argument("--threshold", type=float)
    p.add_argument("--measure", choices=sorted(MEASURE_NAMES))
    p.add_argument("--sigma", type=float)
    p.add_argument("--negative-policy", choices=("clamp_zero", "abs", "keep"), dest="negative_policy")
    p.add_argument("--isolated-policy", choices=("error", "remove"), dest="isolated_policy")
    p.add_argument("--k", type=_positive_int)
    p.add_argument("--m", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--max-restarts", type=int, dest="max_restarts")
    p.add_argument("--eigen-seed", type=int, dest="eigen_seed")
    p.add_argument("--kmeans-seed", type=int, dest="kmeans_seed")
    p.add_argument("--init", choices=("kmeanspp", "random_points"))
    p.add_argument("--max-iters", type=int, dest="max_iters")
    p.add_argument("--tol-changes", type=int, dest="tol_changes")
    p.add_argument("--kmeans-restarts", type=int, dest="kmeans_restarts")
    p.add_argument("--normalize-rows", action="store_const", const=True, dest="normalize_rows")
    p.add_argument("--out-labels", dest="out_labels")
    _add_common(p)
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("eval", help="score a labeling against a similarity matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--truth")
    _add_common(p)
    p.set_defaults(func=_cmd_eval)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpeclustError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
