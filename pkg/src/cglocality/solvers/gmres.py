"""Restarted GMRES: modified Gram-Schmidt Arnoldi with Givens rotations."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DimensionError
from ..sparse import SparseMatrixCsr, norm2, spmv
from .records import SolveReport, SolverConfig, Telemetry


def _back_substitute(R, g, m):
    y = np.zeros(m)
    for i in range(m - 1, -1, -1):
        y[i] = (g[i] - R[i, i + 1:m] @ y[i + 1:m]) / R[i, i]
    return y


def gmres_solve(A: SparseMatrixCsr, b, x0=None, cfg: SolverConfig = SolverConfig(),
                telemetry: Telemetry | None = None) -> SolveReport:
    """GMRES with restarts every ``cfg.restart_len`` steps (0 means never).

    Every inner step records the residual norm carried by the Givens
    recurrence; the last step of each cycle and the final step record the
    true residual ``||b - A u||`` instead.  The iterate is formed at every
    step so that probe and front diagnostics see it.
    """
    b = np.asarray(b, dtype=float)
    n = A.n_rows
    if A.n_cols != n or b.shape != (n,):
        raise DimensionError("A must be square and match b")
    if cfg.restart_len > cfg.max_iter:
        raise ValueError("restart_len must not exceed max_iter")
    tel = telemetry or Telemetry()
    u = np.zeros(n) if x0 is None else np.array(x0, dtype=float)
    cycle_len = cfg.restart_len if cfg.restart_len > 0 else n
    cycle_len = min(cycle_len, n)

    r = b - spmv(A, u)
    rnorm = norm2(r)
    tel.start(b, rnorm)
    threshold = cfg.tol * tel.scale
    happy = 1e-14 * norm2(b)
    records = [tel.record(0, u, rnorm)]
    if rnorm <= threshold and not cfg.fixed_budget:
        return SolveReport(records, u, True, 0, "tolerance")

    k = 0
    while k < cfg.max_iter:
        beta = rnorm
        if beta == 0.0:
            return SolveReport(records, u, True, k, "tolerance", "exact solution")
        m_max = min(cycle_len, cfg.max_iter - k)
        V = np.zeros((m_max + 1, n))
        R = np.zeros((m_max + 1, m_max))
        cs = np.zeros(m_max)
        sn = np.zeros(m_max)
        g = np.zeros(m_max + 1)
        g[0] = beta
        V[0] = r / beta
        x_start = u
        stop = None
        for j in range(m_max):
            w = spmv(A, V[j])
            for i in range(j + 1):
                h = float(V[i] @ w)
                R[i, j] = h
                w = w - h * V[i]
            h_next = norm2(w)
            for i in range(j):
                t = cs[i] * R[i, j] + sn[i] * R[i + 1, j]
                R[i + 1, j] = -sn[i] * R[i, j] + cs[i] * R[i + 1, j]
                R[i, j] = t
            denom = math.hypot(R[j, j], h_next)
            if denom == 0.0 or math.isnan(denom):
                u = x_start
                return SolveReport(records, u, False, k, "breakdown", "Arnoldi breakdown")
            cs[j], sn[j] = R[j, j] / denom, h_next / denom
            R[j, j] = denom
            g[j + 1] = -sn[j] * g[j]
            g[j] = cs[j] * g[j]
            y = _back_substitute(R, g, j + 1)
            u = x_start + V[: j + 1].T @ y
            k += 1
            est = abs(g[j + 1])
            last = j == m_max - 1 or k == cfg.max_iter
            if h_next <= happy:
                stop = "happy"
            elif math.isnan(est):
                stop = "nan"
            elif est <= threshold and not cfg.fixed_budget:
                stop = "tol"
            if last or stop:
                r = b - spmv(A, u)
                rnorm = norm2(r)
                records.append(tel.record(k, u, rnorm))
                break
            records.append(tel.record(k, u, est))
            V[j + 1] = w / h_next
        if stop == "happy":
            return SolveReport(records, u, True, k, "tolerance", "happy breakdown: exact solve")
        if stop == "nan":
            return SolveReport(records, u, False, k, "breakdown", "NaN in residual estimate")
        if stop == "tol" and rnorm <= threshold:
            return SolveReport(records, u, True, k, "tolerance")
    return SolveReport(records, u, rnorm <= threshold, k, "budget")
