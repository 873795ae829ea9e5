"""Matrix Market coordinate format, real field.

Writing always produces ``general`` storage with entries sorted by
``(row, col)`` and values printed with 17 significant digits, which is
enough for a bit-exact round trip of IEEE doubles.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import MatrixMarketError
from .sparse import SparseMatrixCsr, assemble_csr

BANNER = "%%MatrixMarket"


def write_matrix_market(A: SparseMatrixCsr, path, comment=None) -> Path:
    path = Path(path)
    lines = [f"{BANNER} matrix coordinate real general"]
    if comment:
        lines.extend(f"% {c}" for c in comment.splitlines())
    lines.append(f"{A.n_rows} {A.n_cols} {A.nnz}")
    for r, c, v in zip(A.row_ids.tolist(), A.col_indices.tolist(), A.values.tolist()):
        lines.append(f"{r + 1} {c + 1} {v:.17g}")
    path.write_text("\n".join(lines) + "\n")
    return path


def read_matrix_market(path) -> SparseMatrixCsr:
    with open(path) as fh:
        return _parse(fh)


def _parse(lines) -> SparseMatrixCsr:
    it = enumerate(lines, start=1)
    try:
        lineno, header = next(it)
    except StopIteration:
        raise MatrixMarketError("empty file", 1) from None
    tokens = header.split()
    if len(tokens) != 5 or tokens[0] != BANNER:
        raise MatrixMarketError("missing %%MatrixMarket banner", lineno)
    obj, fmt, fld, sym = (t.lower() for t in tokens[1:])
    if obj != "matrix" or fmt != "coordinate":
        raise MatrixMarketError(f"unsupported object/format '{obj} {fmt}'", lineno)
    if fld not in ("real", "double"):
        raise MatrixMarketError(f"unsupported field '{fld}', only real is accepted", lineno)
    if sym not in ("general", "symmetric"):
        raise MatrixMarketError(f"unsupported symmetry '{sym}'", lineno)

    size = None
    for lineno, line in it:
        s = line.strip()
        if not s or s.startswith("%"):
            continue
        parts = s.split()
        if len(parts) != 3:
            raise MatrixMarketError("size line must hold 'rows cols entries'", lineno)
        try:
            size = tuple(int(p) for p in parts)
        except ValueError:
            raise MatrixMarketError("non-integer size line", lineno) from None
        break
    if size is None:
        raise MatrixMarketError("missing size line", lineno)
    n_rows, n_cols, nnz = size
    if min(size) < 0:
        raise MatrixMarketError("negative size", lineno)

    rows = np.empty(nnz, dtype=np.int64)
    cols = np.empty(nnz, dtype=np.int64)
    vals = np.empty(nnz)
    k = 0
    for lineno, line in it:
        s = line.strip()
        if not s or s.startswith("%"):
            continue
        if k >= nnz:
            raise MatrixMarketError(f"more than the declared {nnz} entries", lineno)
        parts = s.split()
        if len(parts) != 3:
            raise MatrixMarketError("entry must hold 'row col value'", lineno)
        try:
            i, j, v = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise MatrixMarketError(f"cannot parse entry '{s}'", lineno) from None
        if not (1 <= i <= n_rows and 1 <= j <= n_cols):
            raise MatrixMarketError(f"index ({i}, {j}) outside {n_rows}x{n_cols} (1-based)", lineno)
        if sym == "symmetric" and j > i:
            raise MatrixMarketError("symmetric storage must list the lower triangle", lineno)
        rows[k], cols[k], vals[k] = i - 1, j - 1, v
        k += 1
    if k != nnz:
        raise MatrixMarketError(f"expected {nnz} entries, found {k}", lineno)

    if sym == "symmetric":
        off = rows != cols
        rows, cols, vals = (np.concatenate((rows, cols[off])),
                            np.concatenate((cols, rows[off])),
                            np.concatenate((vals, vals[off])))
    return assemble_csr(n_rows, n_cols, (rows, cols, vals))
