"""Stationary iterations ``u <- u + B (b - A u)``.

``B`` is ``rho D^-1`` (relaxed Jacobi), ``(D + L)^-1`` / ``(D + U)^-1``
(forward / backward Gauss-Seidel) or ``(D / omega + L)^-1`` (SOR), with
``A = L + D + U``.  The triangular solves run row by row on Python lists,
which is fast enough for the desk-scale problems here.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DimensionError
from ..sparse import SparseMatrixCsr, norm2, spmv
from .records import SolveReport, SolverConfig, Telemetry

METHODS = ("jacobi", "gs_forward", "gs_backward", "sor")


class _Splitting:
    def __init__(self, A: SparseMatrixCsr):
        n = A.n_rows
        self.diag = A.diagonal()
        zero = np.flatnonzero(self.diag == 0.0)
        if zero.size:
            raise ZeroDivisionError(f"zero diagonal entry in row {int(zero[0])}")
        self.lower = [[] for _ in range(n)]
        self.upper = [[] for _ in range(n)]
        for r, c, v in zip(A.row_ids.tolist(), A.col_indices.tolist(), A.values.tolist()):
            if c < r:
                self.lower[r].append((c, v))
            elif c > r:
                self.upper[r].append((c, v))
        self.diag_list = self.diag.tolist()

    def forward(self, r, scale=1.0):
        """Solve ``(D / scale + L) z = r``."""
        z = [0.0] * len(r)
        for i, ri in enumerate(r.tolist()):
            s = ri
            for c, v in self.lower[i]:
                s -= v * z[c]
            z[i] = s / (self.diag_list[i] / scale)
        return np.array(z)

    def backward(self, r):
        """Solve ``(D + U) z = r``."""
        n = len(r)
        z = [0.0] * n
        rl = r.tolist()
        for i in range(n - 1, -1, -1):
            s = rl[i]
            for c, v in self.upper[i]:
                s -= v * z[c]
            z[i] = s / self.diag_list[i]
        return np.array(z)


def stationary_solve(A: SparseMatrixCsr, b, x0=None, method: str = "gs_forward",
                     cfg: SolverConfig = SolverConfig(),
                     telemetry: Telemetry | None = None) -> SolveReport:
    """Run one of the stationary methods in :data:`METHODS`.

    ``cfg.rho`` relaxes Jacobi and ``cfg.omega`` is the SOR parameter.  One
    record is produced per sweep.
    """
    if method not in METHODS:
        raise ValueError(f"unknown stationary method '{method}', choose from {METHODS}")
    b = np.asarray(b, dtype=float)
    n = A.n_rows
    if A.n_cols != n or b.shape != (n,):
        raise DimensionError("A must be square and match b")
    split = _Splitting(A)
    tel = telemetry or Telemetry()
    u = np.zeros(n) if x0 is None else np.array(x0, dtype=float)

    if method == "jacobi":
        inv_d = cfg.rho / split.diag
        apply_B = lambda r: inv_d * r
    elif method == "gs_forward":
        apply_B = split.forward
    elif method == "gs_backward":
        apply_B = split.backward
    else:
        omega = cfg.omega
        apply_B = lambda r: split.forward(r, omega)

    r = b - spmv(A, u)
    rnorm = norm2(r)
    tel.start(b, rnorm)
    threshold = cfg.tol * tel.scale
    records = [tel.record(0, u, rnorm)]
    if rnorm <= threshold and not cfg.fixed_budget:
        return SolveReport(records, u, True, 0, "tolerance")
    k = 0
    while k < cfg.max_iter:
        u = u + apply_B(r)
        r = b - spmv(A, u)
        rnorm = norm2(r)
        k += 1
        records.append(tel.record(k, u, rnorm))
        if math.isnan(rnorm):
            return SolveReport(records, u, False, k, "breakdown", "NaN in residual")
        if rnorm <= threshold and not cfg.fixed_budget:
            return SolveReport(records, u, True, k, "tolerance")
    return SolveReport(records, u, rnorm <= threshold, k, "budget")
