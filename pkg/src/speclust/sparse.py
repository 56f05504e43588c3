"""Sparse matrix storage (COO, CSR), conversions, and matrix-vector products.

Element type is float64 throughout; indices are int64. Matrices are
immutable after construction (backing arrays are marked read-only) and
safe to share across threads. Explicit zeros are preserved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DuplicateEntry, InvalidFormat

__all__ = [
    "CooMatrix",
    "CsrMatrix",
    "coo_canonicalize",
    "coo_to_csr",
    "csr_to_coo",
    "spmv",
    "is_symmetric",
]


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def _as_index_array(x, name: str) -> np.ndarray:
    a = np.ascontiguousarray(x, dtype=np.int64)
    if a.ndim != 1:
        raise InvalidFormat(f"{name} must be one-dimensional")
    return a


def _as_value_array(x) -> np.ndarray:
    a = np.ascontiguousarray(x, dtype=np.float64)
    if a.ndim != 1:
        raise InvalidFormat("vals must be one-dimensional")
    return a


@dataclass(frozen=True)
class CooMatrix:
    """Coordinate-format sparse matrix: parallel (row, col, value) arrays.

    Entries may be unsorted and may contain duplicate (row, col) pairs
    until passed through :func:`coo_canonicalize`.
    """

    n_rows: int
    n_cols: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rows", _as_index_array(self.rows, "rows"))
        object.__setattr__(self, "cols", _as_index_array(self.cols, "cols"))
        object.__setattr__(self, "vals", _as_value_array(self.vals))
        if self.n_rows < 0 or self.n_cols < 0:
            raise InvalidFormat("matrix dimensions must be nonnegative")
        if not (len(self.rows) == len(self.cols) == len(self.vals)):
            raise InvalidFormat("rows, cols, vals must have identical length")
        if self.nnz:
            if self.rows.min() < 0 or self.rows.max() >= self.n_rows:
                raise InvalidFormat("row index out of range")
            if self.cols.min() < 0 or self.cols.max() >= self.n_cols:
                raise InvalidFormat("column index out of range")
        if not np.all(np.isfinite(self.vals)):
            raise InvalidFormat("matrix values must be finite")
        for a in (self.rows, self.cols, self.vals):
            _freeze(a)

    @property
    def nnz(self) -> int:
        return len(self.vals)


@dataclass(frozen=True)
class CsrMatrix:
    """Compressed-sparse-row matrix.

    ``row_ptr`` holds prefix sums of per-row entry counts; within each row
    the column indices are strictly increasing. Structural invariants are
    checked on construction and re-checkable via :meth:`validate`.
    """

    n_rows: int
    n_cols: int
    row_ptr: np.ndarray
    col_idx: np.ndarray
    vals: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "row_ptr", _as_index_array(self.row_ptr, "row_ptr"))
        object.__setattr__(self, "col_idx", _as_index_array(self.col_idx, "col_idx"))
        object.__setattr__(self, "vals", _as_value_array(self.vals))
        self.validate()
        for a in (self.row_ptr, self.col_idx, self.vals):
            _freeze(a)

    @property
    def nnz(self) -> int:
        return len(self.vals)

    def validate(self):
        """Raise InvalidFormat unless all CSR structural invariants hold."""
        if self.n_rows < 0 or self.n_cols < 0:
            raise InvalidFormat("matrix dimensions must be nonnegative")
        if len(self.row_ptr) != self.n_rows + 1:
            raise InvalidFormat("row_ptr must have length n_rows + 1")
        if len(self.col_idx) != len(self.vals):
            raise InvalidFormat("col_idx and vals must have identical length")
        if self.n_rows == 0:
            if self.nnz or self.row_ptr[0] != 0:
                raise InvalidFormat("empty matrix must have empty row_ptr content")
            return
        if self.row_ptr[0] != 0 or self.row_ptr[-1] != self.nnz:
            raise InvalidFormat("row_ptr must start at 0 and end at nnz")
        if np.any(np.diff(self.row_ptr) < 0):
            raise InvalidFormat("row_ptr must be non-decreasing")
        if self.nnz:
            if self.col_idx.min() < 0 or self.col_idx.max() >= self.n_cols:
                raise InvalidFormat("column index out of range")
            # strictly increasing columns within each row: adjacent entries
            # must increase except across row boundaries
            increasing = np.diff(self.col_idx) > 0
            boundary = np.zeros(self.nnz - 1, dtype=bool)
            inner = self.row_ptr[1:-1]
            boundary[inner[(inner > 0) & (inner < self.nnz)] - 1] = True
            if not np.all(increasing | boundary):
                raise InvalidFormat("column indices must strictly increase within rows")
        if not np.all(np.isfinite(self.vals)):
            raise InvalidFormat("matrix values must be finite")

    def row_indices(self) -> np.ndarray:
        """Expand row_ptr to a per-entry row index array (COO-style rows)."""
        return np.repeat(np.arange(self.n_rows, dtype=np.int64), np.diff(self.row_ptr))


def coo_canonicalize(m: CooMatrix, dup_policy: str = "sum") -> CooMatrix:
    """Sort entries by (row, col) and combine duplicates per policy.

    ``dup_policy`` is ``"sum"`` (add duplicate values) or ``"error"``
    (raise DuplicateEntry). Explicit zeros are retained.
    """
    if dup_policy not in ("sum", "error"):
        raise ValueError(f"unknown dup_policy {dup_policy!r}")
    order = np.lexsort((m.cols, m.rows))
    rows = m.rows[order]
    cols = m.cols[order]
    vals = m.vals[order]
    if len(rows) > 1:
        dup = (rows[1:] == rows[:-1]) & (cols[1:] == cols[:-1])
        if dup.any():
            if dup_policy == "error":
                i = int(np.flatnonzero(dup)[0])
                raise DuplicateEntry(
                    f"duplicate entry at ({rows[i]}, {cols[i]})"
                )
            # group starts are positions where the (row, col) key changes
            starts = np.concatenate(([0], np.flatnonzero(~dup) + 1))
            rows = rows[starts]
            cols = cols[starts]
            vals = np.add.reduceat(vals, starts)
    return CooMatrix(m.n_rows, m.n_cols, rows, cols, vals)


def _require_canonical(m: CooMatrix):
    if m.nnz > 1:
        keys_sorted = (m.rows[1:] > m.rows[:-1]) | (
            (m.rows[1:] == m.rows[:-1]) & (m.cols[1:] > m.cols[:-1])
        )
        if not np.all(keys_sorted):
            raise InvalidFormat("COO matrix is not canonical; call coo_canonicalize")


def coo_to_csr(m: CooMatrix) -> CsrMatrix:
    """Compress the row indices of a canonical COO matrix."""
    _require_canonical(m)
    counts = np.bincount(m.rows, minlength=m.n_rows)
    row_ptr = np.concatenate(([0], np.cumsum(counts, dtype=np.int64)))
    return CsrMatrix(m.n_rows, m.n_cols, row_ptr, m.cols, m.vals)


def csr_to_coo(m: CsrMatrix) -> CooMatrix:
    """Expand a CSR matrix back to canonical coordinate form."""
    return CooMatrix(m.n_rows, m.n_cols, m.row_indices(), m.col_idx, m.vals)


def spmv(a: CsrMatrix, x: np.ndarray) -> np.ndarray:
    """Sparse matrix-dense vector product y = A x.

    Each output element is accumulated in column order by a single pass,
    so the result is independent of any caller-side parallelism.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (a.n_cols,):
        raise DimensionMismatch(
            f"operand length {x.shape} does not match n_cols {a.n_cols}"
        )
    prod = a.vals * x[a.col_idx]
    return np.bincount(a.row_indices(), weights=prod, minlength=a.n_rows)


def is_symmetric(a: CsrMatrix) -> bool:
    """Exact structural and value symmetry check (A == A^T bit-for-bit)."""
    if a.n_rows != a.n_cols:
        return False
    rows = a.row_indices()
    transposed = coo_canonicalize(
        CooMatrix(a.n_rows, a.n_cols, a.col_idx, rows, a.vals), dup_policy="error"
    )
    return (
        np.array_equal(transposed.rows, rows)
        and np.array_equal(transposed.cols, a.col_idx)
        and np.array_equal(transposed.vals, a.vals)
    )
