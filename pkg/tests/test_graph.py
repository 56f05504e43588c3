import math

import numpy as np
import pytest

from speclust.errors import DegenerateVector, InvalidFormat
from speclust.graph import (
    SimilarityMeasure,
    build_edges_eps,
    build_edges_knn,
    build_edges_threshold,
    build_similarity,
    similarity,
    validate_edges,
)

COS = SimilarityMeasure.cosine()
CORR = SimilarityMeasure.cross_correlation()


def pairs_as_set(e):
    return {(min(i, j), max(i, j)) for i, j in e}


class TestSimilarity:
    def test_cosine_orthogonal(self):
        assert similarity([1.0, 0.0], [0.0, 1.0], COS) == 0.0
        assert similarity([1.0, 1.0], [1.0, -1.0], COS) == 0.0

    def test_cross_correlation_shifted(self):
        assert similarity([1.0, 2.0, 3.0], [4.0, 5.0, 6.0], CORR) == 1.0

    def test_exp_decay_zero_distance(self):
        m = SimilarityMeasure.exp_decay(1.0)
        x = [0.3, -2.0, 7.5]
        assert similarity(x, x, m) == 1.0

    def test_exp_decay_value(self):
        m = SimilarityMeasure.exp_decay(2.0)
        got = similarity([0.0], [3.0], m)
        assert got == pytest.approx(math.exp(-9.0 / 8.0), rel=1e-15)

    def test_symmetric_evaluation_is_exact(self):
        rng = np.random.default_rng(2)
        measures = [COS, CORR, SimilarityMeasure.exp_decay(0.7)]
        for _ in range(50):
            d = int(rng.integers(1, 10))
            x = rng.standard_normal(d)
            y = rng.standard_normal(d)
            for m in measures:
                if m.kind == "cross_correlation" and d == 1:
                    continue
                assert similarity(x, y, m) == similarity(y, x, m)

    def test_scale_invariance_cosine(self):
        rng = np.random.default_rng(4)
        for _ in range(30):
            x = rng.standard_normal(6)
            y = rng.standard_normal(6)
            a, b = rng.uniform(0.1, 10.0, 2)
            assert similarity(a * x, b * y, COS) == pytest.approx(
                similarity(x, y, COS), abs=1e-12
            )

    def test_affine_invariance_cross_correlation(self):
        rng = np.random.default_rng(6)
        for _ in range(30):
            x = rng.standard_normal(6)
            y = rng.standard_normal(6)
            a1, a2 = rng.uniform(0.1, 5.0, 2)
            b1, b2 = rng.standard_normal(2)
            assert similarity(a1 * x + b1, a2 * y + b2, CORR) == pytest.approx(
                similarity(x, y, CORR), abs=1e-12
            )

    def test_zero_vector_rejected_for_cosine(self):
        with pytest.raises(DegenerateVector):
            similarity([0.0, 0.0], [1.0, 0.0], COS)

    def test_constant_vector_rejected_for_cross_correlation(self):
        with pytest.raises(DegenerateVector):
            similarity([2.0, 2.0, 2.0], [1.0, 0.0, 2.0], CORR)

    def test_range_clamped(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            x = rng.standard_normal(4)
            assert -1.0 <= similarity(x, rng.standard_normal(4), CORR) <= 1.0


class TestEpsGraph:
    def test_example(self):
        pts = [[0.0, 0.0], [1.0, 0.0], [5.0, 0.0]]
        assert pairs_as_set(build_edges_eps(pts, 1.5)) == {(0, 1)}

    def test_below_min_distance_empty(self):
        pts = [[0.0], [10.0], [20.0]]
        assert len(build_edges_eps(pts, 1.0)) == 0

    def test_coincident_points(self):
        pts = [[1.0, 2.0]] * 3
        assert pairs_as_set(build_edges_eps(pts, 0.1)) == {(0, 1), (0, 2), (1, 2)}

    def test_matches_bruteforce_oracle(self):
        rng = np.random.default_rng(17)
        for _ in range(10):
            n = int(rng.integers(2, 200))
            pts = rng.standard_normal((n, 3))
            eps = float(rng.uniform(0.5, 2.0))
            want = set()
            for i in range(n):
                for j in range(i + 1, n):
                    if np.linalg.norm(pts[i] - pts[j]) <= eps:
                        want.add((i, j))
            assert pairs_as_set(build_edges_eps(pts, eps)) == want


class TestKnnGraph:
    def test_collinear_example(self):
        pts = [[0.0], [1.0], [10.0]]
        m = SimilarityMeasure.exp_decay(1.0)
        assert pairs_as_set(build_edges_knn(pts, 1, m)) == {(0, 1), (1, 2)}

    def test_complete_graph(self):
        rng = np.random.default_rng(19)
        pts = rng.standard_normal((7, 3))
        e = build_edges_knn(pts, 6, SimilarityMeasure.exp_decay(1.0))
        assert len(e) == 7 * 6 // 2

    def test_identical_points_mutual_pair(self):
        pts = np.array([[0.0, 0.0], [0.0, 0.0], [5.0, 5.0], [9.0, 0.0]])
        e = build_edges_knn(pts, 1, SimilarityMeasure.exp_decay(1.0))
        assert (0, 1) in pairs_as_set(e)

    def test_union_semantics_against_oracle(self):
        rng = np.random.default_rng(23)
        m = SimilarityMeasure.exp_decay(1.3)
        for _ in range(5):
            n = int(rng.integers(3, 40))
            knn = int(rng.integers(1, n))
            pts = rng.standard_normal((n, 2))
            want = set()
            for i in range(n):
                sims = [
                    (similarity(pts[i], pts[j], m), -j)
                    for j in range(n)
                    if j != i
                ]
                top = sorted(sims, reverse=True)[:knn]
                for _, nj in top:
                    j = -nj
                    want.add((min(i, j), max(i, j)))
            assert pairs_as_set(build_edges_knn(pts, knn, m)) == want


class TestThresholdGraph:
    def test_lambda_one_cosine_empty(self):
        rng = np.random.default_rng(29)
        pts = rng.standard_normal((8, 3))
        assert len(build_edges_threshold(pts, 1.0, COS)) == 0

    def test_lambda_minus_two_complete(self):
        rng = np.random.default_rng(31)
        pts = rng.standard_normal((6, 3))
        assert len(build_edges_threshold(pts, -2.0, COS)) == 6 * 5 // 2

    def test_cos45_example(self):
        pts = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]
        assert pairs_as_set(build_edges_threshold(pts, 0.5, COS)) == {(0, 2), (1, 2)}


class TestBuildSimilarity:
    def test_cross_correlation_shift_pair(self):
        pts = [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]
        w = build_similarity(pts, [[0, 1]], CORR, "keep")
        assert w.nnz == 2
        assert list(w.vals) == [1.0, 1.0]
        assert list(w.rows) == [0, 1]
        assert list(w.cols) == [1, 0]

    def test_anticorrelated_clamped(self):
        pts = [[0.0, 1.0], [1.0, 0.0]]
        w = build_similarity(pts, [[0, 1]], CORR, "clamp_zero")
        assert list(w.vals) == [0.0, 0.0]

    def test_anticorrelated_abs(self):
        pts = [[0.0, 1.0], [1.0, 0.0]]
        w = build_similarity(pts, [[0, 1]], CORR, "abs")
        assert list(w.vals) == [1.0, 1.0]

    def test_empty_edge_list(self):
        w = build_similarity([[1.0], [2.0]], np.empty((0, 2)), SimilarityMeasure.exp_decay(1.0))
        assert w.nnz == 0
        assert w.n_rows == w.n_cols == 2

    def test_exactly_symmetric_and_no_diagonal(self):
        rng = np.random.default_rng(37)
        pts = rng.standard_normal((20, 5))
        e = build_edges_eps(pts, 2.5)
        w = build_similarity(pts, e, CORR, "keep")
        assert w.nnz == 2 * len(e)
        assert not np.any(w.rows == w.cols)
        lookup = {(r, c): v for r, c, v in zip(w.rows, w.cols, w.vals)}
        for (r, c), v in lookup.items():
            assert lookup[(c, r)] == v  # bit-for-bit

    def test_degenerate_point_reported(self):
        pts = [[0.0, 0.0], [1.0, 2.0]]
        with pytest.raises(DegenerateVector) as exc:
            build_similarity(pts, [[0, 1]], COS)
        assert exc.value.index == 0

    def test_edge_validation(self):
        with pytest.raises(InvalidFormat):
            build_similarity([[1.0], [2.0]], [[0, 0]], SimilarityMeasure.exp_decay(1.0))
        with pytest.raises(InvalidFormat):
            build_similarity([[1.0], [2.0]], [[0, 1], [1, 0]], SimilarityMeasure.exp_decay(1.0))

    def test_measure_config_validation(self):
        with pytest.raises(ValueError):
            SimilarityMeasure.exp_decay(0.0)
        with pytest.raises(ValueError):
            SimilarityMeasure("nonsense")


def test_validate_edges_accepts_valid():
    e = validate_edges([[0, 1], [2, 1]], 3)
    assert e.shape == (2, 2)
