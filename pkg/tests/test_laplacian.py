import numpy as np
import pytest

from speclust.errors import DimensionMismatch, IsolatedNode, NotSquare, ZeroDegree
from speclust.laplacian import (
    degrees,
    handle_isolated,
    recover_row_eigvecs,
    row_scale,
    sym_scale,
)
from speclust.sparse import spmv

from util import csr_to_dense, dense_to_csr, path_graph, random_connected_graph


class TestDegrees:
    def test_path(self):
        assert np.array_equal(degrees(dense_to_csr(path_graph())), [1.0, 2.0, 1.0])

    def test_empty_row_gives_zero(self):
        w = np.zeros((3, 3))
        w[0, 1] = w[1, 0] = 1.0
        assert np.array_equal(degrees(dense_to_csr(w)), [1.0, 1.0, 0.0])

    def test_single_offdiagonal_pair(self):
        w = np.zeros((2, 2))
        w[0, 1] = w[1, 0] = 3.0
        assert np.array_equal(degrees(dense_to_csr(w)), [3.0, 3.0])

    def test_not_square(self):
        with pytest.raises(NotSquare):
            degrees(dense_to_csr(np.ones((2, 3))))


class TestHandleIsolated:
    def test_no_isolated_identity_remap(self):
        w = dense_to_csr(path_graph())
        d = degrees(w)
        w2, d2, remap = handle_isolated(w, d, "error")
        assert w2 is w
        assert np.array_equal(remap, [0, 1, 2])

    def test_remove_isolated(self):
        w = np.zeros((3, 3))
        w[0, 1] = w[1, 0] = 2.0
        csr = dense_to_csr(w)
        d = degrees(csr)
        w2, d2, remap = handle_isolated(csr, d, "remove")
        assert w2.n_rows == 2
        assert np.array_equal(remap, [0, 1, -1])
        assert np.array_equal(d2, [2.0, 2.0])
        assert np.array_equal(csr_to_dense(w2), [[0.0, 2.0], [2.0, 0.0]])

    def test_error_policy_reports_indices(self):
        w = np.zeros((2, 2))
        w[1, 1] = 1.0
        with pytest.raises(IsolatedNode) as exc:
            handle_isolated(dense_to_csr(w), degrees(dense_to_csr(w)), "error")
        assert exc.value.indices == [0]


class TestRowScale:
    def test_path_rows(self):
        w = dense_to_csr(path_graph())
        out = csr_to_dense(row_scale(w, degrees(w)))
        assert np.allclose(out, [[0, 1, 0], [0.5, 0, 0.5], [0, 1, 0]], atol=0)

    def test_already_stochastic_unchanged(self):
        w = np.zeros((2, 2))
        w[0, 1] = w[1, 0] = 1.0
        csr = dense_to_csr(w)
        out = row_scale(csr, degrees(csr))
        assert np.array_equal(out.vals, csr.vals)

    def test_single_edge_pair(self):
        w = np.zeros((2, 2))
        w[0, 1] = w[1, 0] = 4.0
        csr = dense_to_csr(w)
        assert np.array_equal(row_scale(csr, degrees(csr)).vals, [1.0, 1.0])

    def test_zero_degree_rejected(self):
        w = np.zeros((2, 2))
        w[0, 1] = w[1, 0] = 1.0
        with pytest.raises(ZeroDegree):
            row_scale(dense_to_csr(w), np.array([1.0, 0.0]))

    def test_rows_sum_to_one(self):
        rng = np.random.default_rng(41)
        for _ in range(20):
            n = int(rng.integers(2, 50))
            w = dense_to_csr(random_connected_graph(rng, n))
            p = row_scale(w, degrees(w))
            sums = spmv(p, np.ones(n))
            assert np.all(np.abs(sums - 1.0) <= 1e-12)


class TestSymScale:
    def test_path(self):
        w = dense_to_csr(path_graph())
        out = csr_to_dense(sym_scale(w, degrees(w)))
        r = 1.0 / np.sqrt(2.0)
        assert np.allclose(out, [[0, r, 0], [r, 0, r], [0, r, 0]], atol=1e-15)

    def test_regular_graph_matches_row_scale(self):
        w = np.zeros((4, 4))
        for i in range(4):
            w[i, (i + 1) % 4] = w[(i + 1) % 4, i] = 1.0
        csr = dense_to_csr(w)
        d = degrees(csr)
        assert np.array_equal(sym_scale(csr, d).vals, row_scale(csr, d).vals)

    def test_two_node_edge(self):
        w = np.zeros((2, 2))
        w[0, 1] = w[1, 0] = 7.5
        csr = dense_to_csr(w)
        assert np.array_equal(sym_scale(csr, degrees(csr)).vals, [1.0, 1.0])

    def test_exactly_symmetric_and_bounded_spectrum(self):
        rng = np.random.default_rng(43)
        for _ in range(10):
            n = int(rng.integers(2, 64))
            w = dense_to_csr(random_connected_graph(rng, n))
            s = csr_to_dense(sym_scale(w, degrees(w)))
            assert np.max(np.abs(s - s.T)) <= 1e-14
            evals = np.linalg.eigvalsh(s)
            assert evals.min() >= -1.0 - 1e-10
            assert evals.max() <= 1.0 + 1e-10

    def test_spectral_equivalence_with_row_scale(self):
        rng = np.random.default_rng(47)
        for _ in range(10):
            n = int(rng.integers(2, 64))
            w = dense_to_csr(random_connected_graph(rng, n))
            d = degrees(w)
            ev_row = np.sort(np.linalg.eigvals(csr_to_dense(row_scale(w, d))).real)
            ev_sym = np.sort(np.linalg.eigvalsh(csr_to_dense(sym_scale(w, d))))
            assert np.max(np.abs(ev_row - ev_sym)) <= 1e-10


class TestRecoverRowEigvecs:
    def test_regular_graph_unchanged_up_to_sign(self):
        w = np.zeros((4, 4))
        for i in range(4):
            w[i, (i + 1) % 4] = w[(i + 1) % 4, i] = 1.0
        csr = dense_to_csr(w)
        d = degrees(csr)
        s = csr_to_dense(sym_scale(csr, d))
        _, u = np.linalg.eigh(s)
        v = recover_row_eigvecs(u[:, -2:], d)
        assert np.allclose(np.abs(v), np.abs(u[:, -2:]), atol=1e-12)

    def test_path_top_eigvec_becomes_constant(self):
        w = dense_to_csr(path_graph())
        d = degrees(w)
        u = np.array([[1.0], [np.sqrt(2.0)], [1.0]])
        u /= np.linalg.norm(u)
        v = recover_row_eigvecs(u, d)
        assert np.allclose(v, np.full((3, 1), 1.0 / np.sqrt(3.0)), atol=1e-12)

    def test_zero_columns(self):
        out = recover_row_eigvecs(np.empty((3, 0)), np.ones(3))
        assert out.shape == (3, 0)

    def test_recovered_pairs_satisfy_row_operator(self):
        rng = np.random.default_rng(53)
        for _ in range(10):
            n = int(rng.integers(3, 40))
            w = dense_to_csr(random_connected_graph(rng, n))
            d = degrees(w)
            s = csr_to_dense(sym_scale(w, d))
            evals, u = np.linalg.eigh(s)
            k = min(3, n)
            v = recover_row_eigvecs(u[:, -k:], d)
            p = csr_to_dense(row_scale(w, d))
            for c in range(k):
                lam = evals[-k + c]
                assert np.linalg.norm(p @ v[:, c] - lam * v[:, c]) <= 1e-8

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            recover_row_eigvecs(np.ones((3, 1)), np.ones(4))


def test_row_stochastic_fixed_point_is_exact():
    rng = np.random.default_rng(59)
    for _ in range(10):
        n = int(rng.integers(2, 40))
        w = dense_to_csr(random_connected_graph(rng, n))
        p = row_scale(w, degrees(w))
        out = spmv(p, np.ones(n))
        assert np.all(np.abs(out - 1.0) <= 1e-12)
