import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cglocality.errors import AssemblyError, DimensionError, SizeGuardError
from cglocality.preconditioners import build_hierarchical
from cglocality.problems import build_1d
from cglocality.sparse import (SparseMatrixCsr, assemble_csr, axpy, block_diag, dot, from_dense,
                               identity, is_symmetric, lower_band, norm2, spmv, to_dense,
                               transpose, triplets_of)

from .strategies import dense_matrices, sparse_and_dense


def _check_invariants(A: SparseMatrixCsr):
    off = A.row_offsets
    assert off[0] == 0 and off[-1] == A.values.size
    assert np.all(np.diff(off) >= 0)
    for i in range(A.n_rows):
        cols, vals = A.row(i)
        assert np.all(np.diff(cols) > 0)
        assert np.all(cols < A.n_cols)
        assert np.all(vals != 0.0)


# --- assembly ---------------------------------------------------------------

def test_assemble_identity():
    A = assemble_csr(2, 2, [(0, 0, 1.0), (1, 1, 1.0)])
    np.testing.assert_array_equal(to_dense(A), np.eye(2))


def test_assemble_sums_duplicates():
    A = assemble_csr(2, 2, [(0, 1, 2.0), (0, 1, 3.0)])
    assert A.nnz == 1
    assert A.row(0)[0].tolist() == [1] and A.row(0)[1].tolist() == [5.0]


def test_assemble_drops_exact_zero_sums():
    A = assemble_csr(3, 3, [(0, 0, 1.5), (0, 0, -1.5), (2, 1, 0.0), (1, 1, 4.0)])
    assert A.nnz == 1
    _check_invariants(A)


def test_assemble_out_of_range_names_triplet():
    with pytest.raises(AssemblyError, match=r"triplet 1 \(2, 0"):
        assemble_csr(2, 2, [(0, 0, 1.0), (2, 0, 1.0)])
    with pytest.raises(AssemblyError):
        assemble_csr(2, 2, [(0, -1, 1.0)])


def test_assemble_accepts_array_triplets():
    A = assemble_csr(3, 3, (np.array([2, 0, 2]), np.array([0, 1, 0]), np.array([1.0, 2.0, 3.0])))
    np.testing.assert_array_equal(to_dense(A), [[0, 2, 0], [0, 0, 0], [4, 0, 0]])


def test_first_row_of_scaled_1d_matrix():
    # n=4, gamma=0: d/2 = 1 on the diagonal, -1 coupling, times 1/h^2 = 16
    A = build_1d(4, 0.0, 0.0).matrix
    cols, vals = A.row(0)
    assert cols.tolist() == [0, 1]
    assert vals.tolist() == [16.0, -16.0]


def test_constructor_rejects_unsorted_columns():
    with pytest.raises(AssemblyError):
        SparseMatrixCsr(1, 3, np.array([0, 2]), np.array([2, 1]), np.array([1.0, 1.0]))


def test_arrays_are_read_only():
    A = identity(3)
    with pytest.raises(ValueError):
        A.values[0] = 2.0


@given(dense_matrices())
def test_assembly_invariants_from_dense(M):
    A = from_dense(M)
    _check_invariants(A)
    np.testing.assert_array_equal(to_dense(A), M)


@given(dense_matrices())
def test_dense_triplet_round_trip(M):
    A = from_dense(M)
    B = assemble_csr(*A.shape, list(triplets_of(A)))
    np.testing.assert_array_equal(to_dense(B), M)


# --- spmv -------------------------------------------------------------------

def test_spmv_identity():
    v = np.array([1.0, -2.0, 3.5])
    np.testing.assert_array_equal(spmv(identity(3), v), v)


def test_spmv_row_sums_of_1d_matrix():
    A = build_1d(8, 0.0, 0.0).matrix
    y = spmv(A, np.ones(8))
    assert np.all(y[:-1] == 0.0)
    assert y[-1] == 64.0


def test_spmv_random_5x5(rng):
    M = np.where(rng.random((5, 5)) < 0.4, rng.standard_normal((5, 5)), 0.0)
    x = rng.standard_normal(5)
    y = spmv(from_dense(M), x)
    # relative to |M||x| so cancellation in M x cannot inflate the ratio
    assert np.linalg.norm(y - M @ x) <= 1e-14 * np.linalg.norm(np.abs(M) @ np.abs(x))


def test_spmv_empty_rows_give_positive_zero():
    A = assemble_csr(3, 3, [(0, 0, 2.0)])
    y = spmv(A, np.array([1.0, -1.0, -1.0]))
    assert y.tolist() == [2.0, 0.0, 0.0]
    assert not np.signbit(y[1:]).any()


def test_spmv_dimension_mismatch():
    with pytest.raises(DimensionError):
        spmv(identity(3), np.ones(4))


@settings(max_examples=100)
@given(sparse_and_dense(), st.data())
def test_spmv_matches_dense_product(pair, data):
    A, M = pair
    x = data.draw(st.lists(st.floats(-1e3, 1e3), min_size=A.n_cols, max_size=A.n_cols))
    x = np.array(x)
    y = spmv(A, x)
    ref = M @ x
    scale = np.abs(M) @ np.abs(x)
    assert np.all(np.abs(y - ref) <= 1e-14 * scale)


@given(sparse_and_dense(square=True), st.data())
def test_spmv_zero_propagation(pair, data):
    A, _ = pair
    n = A.n_rows
    x = np.array(data.draw(st.lists(st.floats(-1e3, 1e3), min_size=n, max_size=n)))
    i = data.draw(st.integers(0, n - 1))
    cols, _ = A.row(i)
    x[cols] = 0.0
    x[i] = 0.0
    y = spmv(A, x)
    assert y[i] == 0.0 and not np.signbit(y[i])


# --- vector kernels ---------------------------------------------------------

def test_vector_kernels():
    assert dot(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0
    np.testing.assert_array_equal(axpy(2.0, np.array([1.0, 1.0]), np.array([0.0, 1.0])), [2.0, 3.0])
    assert norm2(np.ones(64)) == 8.0


def test_vector_kernel_dimension_checks():
    for fn in (lambda: dot(np.ones(2), np.ones(3)), lambda: axpy(1.0, np.ones(2), np.ones(3))):
        with pytest.raises(DimensionError):
            fn()


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=50))
def test_norm2_is_sqrt_of_dot(xs):
    x = np.array(xs)
    assert norm2(x) >= 0.0
    assert norm2(x) == np.sqrt(dot(x, x))


# --- transpose, dense, symmetry ----------------------------------------------

def test_transpose_of_symmetric_1d_matrix():
    A = build_1d(8, 2.0, 0.0).matrix
    np.testing.assert_array_equal(to_dense(transpose(A)), to_dense(A))


def test_transpose_of_level_factor():
    Tt = transpose(build_hierarchical(8, 1).factors[0])
    cols, vals = Tt.row(1)
    assert cols.tolist() == [0, 1, 2]
    assert vals.tolist() == [0.5, 1.0, 0.5]


def test_transpose_rectangular(rng):
    M = np.where(rng.random((3, 5)) < 0.5, rng.standard_normal((3, 5)), 0.0)
    np.testing.assert_array_equal(to_dense(transpose(from_dense(M))), M.T)


@given(sparse_and_dense())
def test_transpose_involution(pair):
    A, _ = pair
    B = transpose(transpose(A))
    np.testing.assert_array_equal(B.row_offsets, A.row_offsets)
    np.testing.assert_array_equal(B.col_indices, A.col_indices)
    np.testing.assert_array_equal(B.values, A.values)
    _check_invariants(transpose(A))


def test_to_dense_identity_and_guard():
    np.testing.assert_array_equal(to_dense(identity(3)), np.eye(3))
    with pytest.raises(SizeGuardError):
        to_dense(identity(5), limit=24)


def test_to_dense_level_factor():
    T = to_dense(build_hierarchical(8, 1).factors[0])
    expected = np.eye(8)
    for i in (0, 2, 4, 6):
        for j in (i - 1, i + 1):
            if j >= 0:
                expected[i, j] = 0.5
    np.testing.assert_array_equal(T, expected)


def test_is_symmetric_cases():
    A = build_1d(8, 0.0, 0.0).matrix
    assert is_symmetric(A, 0.0)
    assert is_symmetric(identity(4))
    TA = from_dense(to_dense(build_hierarchical(8, 1).factors[0]) @ to_dense(A))
    assert not is_symmetric(TA, 0.0)
    with pytest.raises(DimensionError):
        is_symmetric(assemble_csr(2, 3, []))


def test_is_symmetric_pattern_asymmetry():
    A = assemble_csr(2, 2, [(0, 1, 1e-3)])
    assert not is_symmetric(A, 0.0)
    assert is_symmetric(A, 1e-3)


def test_lower_band_layout():
    A = build_1d(4, 0.0, 0.0).matrix
    ab = lower_band(A)
    assert ab.shape == (2, 4)
    np.testing.assert_array_equal(ab[0], to_dense(A).diagonal())
    np.testing.assert_array_equal(ab[1, :3], np.diag(to_dense(A), -1))


def test_block_diag():
    B = block_diag([identity(2), from_dense([[0.0, 3.0], [1.0, 0.0]])])
    assert B.shape == (4, 4)
    assert to_dense(B)[2, 3] == 3.0 and to_dense(B)[1, 2] == 0.0
