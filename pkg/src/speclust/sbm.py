"""Planted-partition stochastic block model generator.

Each unordered intra-block pair is connected independently with
probability ``p_in`` and each inter-block pair with ``p_out``; the output
is a symmetric unit-weight adjacency matrix with no self-loops plus the
ground-truth block label per node. Every block pair samples from its own
RNG substream derived from (seed, block i, block j), so results are
seed-deterministic regardless of evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadConfig
from .sparse import CooMatrix, coo_canonicalize

__all__ = ["SbmConfig", "sbm_generate"]


@dataclass(frozen=True)
class SbmConfig:
    block_sizes: tuple[int, ...]
    p_in: float
    p_out: float
    seed: int = 0

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.block_sizes)
        object.__setattr__(self, "block_sizes", sizes)
        if len(sizes) == 0 or any(s < 1 for s in sizes):
            raise BadConfig("block_sizes must be a nonempty list of counts >= 1")
        if not 0.0 <= self.p_out <= self.p_in <= 1.0:
            raise BadConfig(
                f"need 0 <= p_out <= p_in <= 1, got p_in={self.p_in}, p_out={self.p_out}"
            )


def _pair_rng(seed: int, bi: int, bj: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(bi, bj)))


def _sample_intra(rng, size: int, offset: int, p: float):
    npairs = size * (size - 1) // 2
    if npairs == 0 or p == 0.0:
        return None
    count = rng.binomial(npairs, p)
    if count == 0:
        return None
    picks = rng.choice(npairs, size=count, replace=False)
    tri_i, tri_j = np.triu_indices(size, k=1)
    return tri_i[picks] + offset, tri_j[picks] + offset


def _sample_inter(rng, size_i: int, off_i: int, size_j: int, off_j: int, p: float):
    npairs = size_i * size_j
    if npairs == 0 or p == 0.0:
        return None
    count = rng.binomial(npairs, p)
    if count == 0:
        return None
    picks = rng.choice(npairs, size=count, replace=False)
    return picks // size_j + off_i, picks % size_j + off_j


def sbm_generate(cfg: SbmConfig) -> tuple[CooMatrix, np.ndarray]:
    """Draw one graph; returns (adjacency, ground-truth labels).

    The number of edges inside each block pair is Binomial(pair count,
    probability), realized as a uniform subset of that size, which is
    distributionally identical to independent per-pair coin flips.
    """
    sizes = np.array(cfg.block_sizes, dtype=np.int64)
    offsets = np.concatenate(([0], np.cumsum(sizes)))
    n = int(offsets[-1])
    r = len(sizes)
    labels = np.repeat(np.arange(r, dtype=np.int64), sizes)
    src, dst = [], []
    for bi in range(r):
        for bj in range(bi, r):
            rng = _pair_rng(cfg.seed, bi, bj)
            if bi == bj:
                drawn = _sample_intra(rng, int(sizes[bi]), int(offsets[bi]), cfg.p_in)
            else:
                drawn = _sample_inter(
                    rng,
                    int(sizes[bi]),
                    int(offsets[bi]),
                    int(sizes[bj]),
                    int(offsets[bj]),
                    cfg.p_out,
                )
            if drawn is not None:
                src.append(drawn[0])
                dst.append(drawn[1])
    if src:
        i = np.concatenate(src)
        j = np.concatenate(dst)
        rows = np.concatenate((i, j))
        cols = np.concatenate((j, i))
    else:
        rows = np.empty(0, dtype=np.int64)
        cols = np.empty(0, dtype=np.int64)
    vals = np.ones(len(rows))
    adj = coo_canonicalize(CooMatrix(n, n, rows, cols, vals), dup_policy="error")
    return adj, labels
