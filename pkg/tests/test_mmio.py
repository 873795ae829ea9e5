import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import HealthCheck
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cglocality.errors import MatrixMarketError
from cglocality.mmio import read_matrix_market, write_matrix_market
from cglocality.problems import build_1d
from cglocality.sparse import assemble_csr, to_dense

from .strategies import sparse_and_dense

any_double = st.floats(allow_nan=False, allow_infinity=False, allow_subnormal=True)


def _write(tmp_path, text, name="m.mtx"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_round_trip_1d_matrix(tmp_path):
    A = build_1d(8, 2.0, 0.0).matrix
    B = read_matrix_market(write_matrix_market(A, tmp_path / "a.mtx"))
    np.testing.assert_array_equal(B.row_offsets, A.row_offsets)
    np.testing.assert_array_equal(B.col_indices, A.col_indices)
    np.testing.assert_array_equal(B.values, A.values)


def test_written_layout(tmp_path):
    A = assemble_csr(2, 3, [(1, 0, 0.1), (0, 2, -2.0)])
    text = write_matrix_market(A, tmp_path / "a.mtx", comment="two\nlines").read_text().splitlines()
    assert text[0] == "%%MatrixMarket matrix coordinate real general"
    assert text[1:3] == ["% two", "% lines"]
    assert text[3] == "2 3 2"
    assert text[4:] == ["1 3 -2", "2 1 0.10000000000000001"]


def test_symmetric_expansion(tmp_path):
    p = _write(tmp_path, "%%MatrixMarket matrix coordinate real symmetric\n"
                         "% lower triangle only\n2 2 3\n1 1 2\n2 1 -1\n2 2 2\n")
    A = read_matrix_market(p)
    assert A.nnz == 4
    np.testing.assert_array_equal(to_dense(A), [[2, -1], [-1, 2]])


@pytest.mark.parametrize("text, line, match", [
    ("%%MatrixMarket matrix coordinate real general\n2 2 1\n0 1 1.0\n", 3, "outside"),
    ("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n", 3, "outside"),
    ("%%MatrixMarket matrix coordinate complex general\n2 2 1\n1 1 1 0\n", 1, "field"),
    ("%%MatrixMarket matrix coordinate integer general\n2 2 1\n1 1 1\n", 1, "field"),
    ("%%MatrixMarket matrix array real general\n2 2\n", 1, "format"),
    ("%MatrixMarket matrix coordinate real general\n2 2 0\n", 1, "banner"),
    ("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n", 3, "expected 2"),
    ("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1.0\n2 2 1.0\n", 4, "more than"),
    ("%%MatrixMarket matrix coordinate real general\n2 x 1\n", 2, "size"),
    ("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 abc\n", 3, "parse"),
    ("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 2 1.0\n", 3, "lower triangle"),
    ("%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 0\n", 1, "symmetry"),
])
def test_parse_errors_carry_line_number(tmp_path, text, line, match):
    with pytest.raises(MatrixMarketError, match=match) as exc:
        read_matrix_market(_write(tmp_path, text))
    assert exc.value.line == line
    assert str(exc.value).startswith(f"line {line}:")


@settings(suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(sparse_and_dense())
def test_round_trip_random(tmp_path, pair):
    A, M = pair
    B = read_matrix_market(write_matrix_market(A, tmp_path / "r.mtx"))
    np.testing.assert_array_equal(to_dense(B), M)


@settings(suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(arrays(float, st.integers(1, 30), elements=any_double.filter(lambda v: v != 0.0)))
def test_values_round_trip_bit_exact(tmp_path, vals):
    n = vals.size
    A = assemble_csr(n, 1, (np.arange(n), np.zeros(n, int), vals))
    B = read_matrix_market(write_matrix_market(A, tmp_path / "v.mtx"))
    assert B.values.tobytes() == A.values.tobytes()
