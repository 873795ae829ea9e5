"""Conjugate gradients, optionally preconditioned."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DimensionError, NotSPDError
from ..sparse import SparseMatrixCsr, dot, is_symmetric, norm2, spmv
from .records import SolveReport, SolverConfig, Telemetry


def cg_solve(A: SparseMatrixCsr, b, x0=None, cfg: SolverConfig = SolverConfig(),
             precond=None, telemetry: Telemetry | None = None) -> SolveReport:
    """Solve ``A u = b`` for symmetric positive definite ``A``.

    Without ``precond`` this follows the textbook recurrence, including the
    early exit right after the residual update.  ``precond`` is a callable
    ``r -> C r`` for a symmetric positive definite ``C``.  Records carry the
    Euclidean norm of the recursively updated residual ``r_k``.

    In ``fixed_budget`` mode exactly ``cfg.max_iter`` iterations run unless
    the residual vanishes or the recurrence breaks down.
    """
    b = np.asarray(b, dtype=float)
    n = A.n_rows
    if A.n_cols != n or b.shape != (n,):
        raise DimensionError("A must be square and match b")
    if cfg.check_symmetry and not is_symmetric(A, 1e-12 * float(np.max(np.abs(A.values), initial=1.0))):
        raise NotSPDError("cg_solve needs a symmetric matrix")
    tel = telemetry or Telemetry()
    u = np.zeros(n) if x0 is None else np.array(x0, dtype=float)

    r = b - spmv(A, u)
    z = r if precond is None else precond(r)
    p = z.copy()
    rz = dot(r, z)
    rnorm = norm2(r)
    tel.start(b, rnorm)
    threshold = cfg.tol * tel.scale
    records = [tel.record(0, u, rnorm)]

    def report(k, reason, message=""):
        converged = rnorm <= threshold
        return SolveReport(records, u, converged, k, reason, message)

    if rnorm <= threshold and not cfg.fixed_budget:
        return report(0, "tolerance")

    k = 0
    while k < cfg.max_iter:
        if rz == 0.0:
            return report(k, "tolerance" if rnorm == 0.0 else "breakdown",
                          "residual inner product vanished")
        Ap = spmv(A, p)
        pAp = dot(p, Ap)
        if not pAp > 0.0:
            msg = f"p^T A p = {pAp:.3e} at iteration {k}"
            if math.isnan(pAp):
                return report(k, "breakdown", "NaN detected; " + msg)
            return report(k, "breakdown", "matrix not SPD: " + msg)
        alpha = rz / pAp
        u = u + alpha * p
        r = r - alpha * Ap
        rnorm = norm2(r)
        k += 1
        records.append(tel.record(k, u, rnorm))
        if math.isnan(rnorm):
            return report(k, "breakdown", "NaN in residual")
        if rnorm <= threshold and not cfg.fixed_budget:
            return report(k, "tolerance")
        z = r if precond is None else precond(r)
        rz_new = dot(r, z)
        beta = rz_new / rz
        p = z + beta * p
        rz = rz_new
    return report(k, "budget")
