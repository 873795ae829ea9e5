"""Compressed sparse row storage and the kernels built on it.

All matrices in the package pass through :class:`SparseMatrixCsr`.  Kernels
are written so that an entry depending only on zero inputs comes out as an
exact ``0.0``; the locality diagnostics compare iterates bitwise and rely on
that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import AssemblyError, DimensionError, SizeGuardError

DENSE_LIMIT = 10_000_000


@dataclass(frozen=True, eq=False)
class SparseMatrixCsr:
    """Immutable CSR matrix.

    Construct through :func:`assemble_csr` or :func:`from_dense`; the
    constructor only checks the structural invariants.
    """

    n_rows: int
    n_cols: int
    row_offsets: np.ndarray
    col_indices: np.ndarray
    values: np.ndarray
    _row_ids: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        offsets = np.asarray(self.row_offsets, dtype=np.int64)
        cols = np.asarray(self.col_indices, dtype=np.int64)
        vals = np.asarray(self.values, dtype=np.float64)
        if offsets.shape != (self.n_rows + 1,):
            raise AssemblyError("row_offsets must have length n_rows + 1")
        if offsets[0] != 0 or offsets[-1] != vals.size or cols.size != vals.size:
            raise AssemblyError("row_offsets inconsistent with stored entries")
        if np.any(np.diff(offsets) < 0):
            raise AssemblyError("row_offsets must be non-decreasing")
        row_ids = np.repeat(np.arange(self.n_rows, dtype=np.int64), np.diff(offsets))
        if cols.size:
            if cols.min() < 0 or cols.max() >= self.n_cols:
                raise AssemblyError("column index out of range")
            same_row = row_ids[1:] == row_ids[:-1]
            if np.any(same_row & (cols[1:] <= cols[:-1])):
                raise AssemblyError("column indices must increase strictly within a row")
        for arr in (offsets, cols, vals, row_ids):
            arr.setflags(write=False)
        object.__setattr__(self, "row_offsets", offsets)
        object.__setattr__(self, "col_indices", cols)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "_row_ids", row_ids)

    @property
    def shape(self):
        return (self.n_rows, self.n_cols)

    @property
    def nnz(self):
        return int(self.values.size)

    @property
    def row_ids(self):
        """Row index of every stored entry (COO view)."""
        return self._row_ids

    def row(self, i):
        """Return ``(cols, vals)`` of row ``i``."""
        lo, hi = self.row_offsets[i], self.row_offsets[i + 1]
        return self.col_indices[lo:hi], self.values[lo:hi]

    def diagonal(self):
        d = np.zeros(min(self.n_rows, self.n_cols))
        on_diag = self._row_ids == self.col_indices
        d[self._row_ids[on_diag]] = self.values[on_diag]
        return d

    def __matmul__(self, x):
        return spmv(self, x)

    def __repr__(self):
        return f"SparseMatrixCsr({self.n_rows}x{self.n_cols}, nnz={self.nnz})"


def assemble_csr(n_rows: int, n_cols: int, triplets) -> SparseMatrixCsr:
    """Build a CSR matrix from ``(row, col, value)`` triplets.

    Duplicates are summed in input order and entries whose sum is exactly
    zero are dropped.  ``triplets`` may be a sequence of 3-tuples or a tuple
    of three equal-length arrays ``(rows, cols, vals)``.
    """
    rows, cols, vals = _split_triplets(triplets)
    bad = (rows < 0) | (rows >= n_rows) | (cols < 0) | (cols >= n_cols)
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        raise AssemblyError(
            f"triplet {k} ({rows[k]}, {cols[k]}, {vals[k]!r}) out of range "
            f"for a {n_rows}x{n_cols} matrix"
        )
    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]
    if rows.size:
        starts = np.flatnonzero(
            np.concatenate(([True], (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])))
        )
        vals = np.add.reduceat(vals, starts)
        rows, cols = rows[starts], cols[starts]
        keep = vals != 0.0
        rows, cols, vals = rows[keep], cols[keep], vals[keep]
    counts = np.bincount(rows, minlength=n_rows)
    offsets = np.concatenate(([0], np.cumsum(counts)))
    return SparseMatrixCsr(n_rows, n_cols, offsets, cols, vals)


def _split_triplets(triplets):
    if isinstance(triplets, tuple) and len(triplets) == 3 and not np.isscalar(triplets[0]):
        rows, cols, vals = triplets
    else:
        triplets = list(triplets)
        if not triplets:
            return (np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0))
        rows, cols, vals = zip(*triplets)
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    vals = np.asarray(vals, dtype=np.float64)
    if not (rows.shape == cols.shape == vals.shape):
        raise AssemblyError("rows, cols and values must have equal length")
    return rows, cols, vals


def from_dense(M) -> SparseMatrixCsr:
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2:
        raise DimensionError("expected a 2D array")
    r, c = np.nonzero(M)
    return assemble_csr(M.shape[0], M.shape[1], (r, c, M[r, c]))


def identity(n: int) -> SparseMatrixCsr:
    idx = np.arange(n)
    return SparseMatrixCsr(n, n, np.arange(n + 1), idx, np.ones(n))


def spmv(A: SparseMatrixCsr, x) -> np.ndarray:
    """Return ``A @ x``.

    Rows without stored entries produce exactly ``0.0``.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (A.n_cols,):
        raise DimensionError(f"vector of length {x.shape} does not match {A.n_cols} columns")
    products = A.values * x[A.col_indices]
    return np.bincount(A.row_ids, weights=products, minlength=A.n_rows)


def _check_pair(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionError(f"length mismatch: {x.shape} vs {y.shape}")
    return x, y


def dot(x, y) -> float:
    x, y = _check_pair(x, y)
    return float(np.dot(x, y))


def axpy(a: float, x, y) -> np.ndarray:
    """Return ``a * x + y`` as a new vector."""
    x, y = _check_pair(x, y)
    return a * x + y


def norm2(x) -> float:
    x = np.asarray(x, dtype=np.float64)
    return math.sqrt(dot(x, x))


def transpose(A: SparseMatrixCsr) -> SparseMatrixCsr:
    order = np.lexsort((A.row_ids, A.col_indices))
    cols = A.row_ids[order]
    vals = A.values[order]
    counts = np.bincount(A.col_indices, minlength=A.n_cols)
    offsets = np.concatenate(([0], np.cumsum(counts)))
    return SparseMatrixCsr(A.n_cols, A.n_rows, offsets, cols, vals)


def to_dense(A: SparseMatrixCsr, limit: int = DENSE_LIMIT) -> np.ndarray:
    if A.n_rows * A.n_cols > limit:
        raise SizeGuardError(
            f"dense expansion of {A.n_rows}x{A.n_cols} exceeds {limit} entries"
        )
    M = np.zeros(A.shape)
    M[A.row_ids, A.col_indices] = A.values
    return M


def is_symmetric(A: SparseMatrixCsr, tol: float = 0.0) -> bool:
    if A.n_rows != A.n_cols:
        raise DimensionError("symmetry check needs a square matrix")
    return _asymmetry(A) <= tol


def _asymmetry(A: SparseMatrixCsr) -> float:
    At = transpose(A)
    n = A.n_cols
    keys_a = A.row_ids * n + A.col_indices
    keys_t = At.row_ids * n + At.col_indices
    # both key arrays are sorted because CSR rows are sorted
    keys = np.union1d(keys_a, keys_t)
    va = np.zeros(keys.size)
    vt = np.zeros(keys.size)
    va[np.searchsorted(keys, keys_a)] = A.values
    vt[np.searchsorted(keys, keys_t)] = At.values
    return float(np.max(np.abs(va - vt), initial=0.0))


def bandwidth(A: SparseMatrixCsr) -> int:
    """Largest ``|i - j|`` over stored entries."""
    if A.nnz == 0:
        return 0
    return int(np.max(np.abs(A.row_ids - A.col_indices)))


def lower_band(A: SparseMatrixCsr, limit: int = DENSE_LIMIT) -> np.ndarray:
    """Lower banded storage ``ab[i - j, j] = A[i, j]`` as used by LAPACK."""
    bw = bandwidth(A)
    if (bw + 1) * A.n_cols > limit:
        raise SizeGuardError(f"band storage ({bw + 1}x{A.n_cols}) exceeds {limit} entries")
    ab = np.zeros((bw + 1, A.n_cols))
    lower = A.row_ids >= A.col_indices
    r, c = A.row_ids[lower], A.col_indices[lower]
    ab[r - c, c] = A.values[lower]
    return ab


def triplets_of(A: SparseMatrixCsr) -> Iterable[tuple[int, int, float]]:
    for r, c, v in zip(A.row_ids.tolist(), A.col_indices.tolist(), A.values.tolist()):
        yield r, c, v


def block_diag(blocks: Sequence[SparseMatrixCsr]) -> SparseMatrixCsr:
    rows, cols, vals = [], [], []
    r0 = c0 = 0
    for B in blocks:
        rows.append(B.row_ids + r0)
        cols.append(B.col_indices + c0)
        vals.append(B.values)
        r0 += B.n_rows
        c0 += B.n_cols
    return assemble_csr(r0, c0, (np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)))
