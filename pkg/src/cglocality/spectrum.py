"""Extreme eigenvalues of SPD matrices.

``lambda_max`` comes from Lanczos with full reorthogonalization,
``lambda_min`` from inverse iteration with a banded Cholesky inner solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import NotSPDError
from .sparse import SparseMatrixCsr, lower_band, spmv


@dataclass(frozen=True)
class SpectrumEstimate:
    lambda_min: float
    lambda_max: float
    converged: bool = True
    iterations_used: int = 0

    @property
    def kappa(self) -> float:
        return self.lambda_max / self.lambda_min


def _start_vector(n, seed=0):
    v = np.random.default_rng(seed).standard_normal(n)
    return v / np.linalg.norm(v)


def _ritz_bound(alpha, beta, b_next):
    """Top Ritz value and an error bound ``min(res, res**2 / gap)``."""
    m = len(alpha)
    lo = max(m - 2, 0)
    evals, evecs = sla.eigh_tridiagonal(np.array(alpha), np.array(beta),
                                        select="i", select_range=(lo, m - 1))
    theta = float(evals[-1])
    res = b_next * abs(evecs[-1, -1])
    if m > 1:
        gap = theta - float(evals[-2])
        if gap > 0:
            return theta, min(res, res * res / gap)
    return theta, res


def lanczos_max(A: SparseMatrixCsr, rel_tol=1e-10, max_iter=1000, seed=0):
    """Largest eigenvalue; returns ``(theta, converged, steps)``."""
    n = A.n_rows
    steps = min(max_iter, n)
    V = np.zeros((steps + 1, n))
    V[0] = _start_vector(n, seed)
    alpha, beta = [], []
    theta = 0.0
    for j in range(steps):
        w = spmv(A, V[j])
        a = float(V[j] @ w)
        alpha.append(a)
        w -= a * V[j]
        if j:
            w -= beta[-1] * V[j - 1]
        # full reorthogonalization, two passes
        for _ in range(2):
            w -= V[: j + 1].T @ (V[: j + 1] @ w)
        b = float(np.linalg.norm(w))
        theta, bound = _ritz_bound(alpha, beta, b)
        if bound <= rel_tol * abs(theta) or b == 0.0 or j + 1 == n:
            return theta, True, j + 1
        beta.append(b)
        V[j + 1] = w / b
    return theta, False, steps


def inverse_iteration_min(A: SparseMatrixCsr, rel_tol=1e-10, max_iter=1000, seed=1):
    """Smallest eigenvalue via inverse iteration; returns ``(theta, converged, steps)``."""
    try:
        factor = sla.cholesky_banded(lower_band(A), lower=True)
    except np.linalg.LinAlgError as exc:
        raise NotSPDError("Cholesky factorization failed; matrix is not SPD") from exc
    v = _start_vector(A.n_rows, seed)
    theta_old = math.nan
    for k in range(1, max_iter + 1):
        w = sla.cho_solve_banded((factor, True), v)
        v = w / np.linalg.norm(w)
        theta = float(v @ spmv(A, v))
        if theta <= 0.0:
            raise NotSPDError(f"non-positive Rayleigh quotient {theta:g}")
        if abs(theta - theta_old) <= rel_tol * theta:
            return theta, True, k
        theta_old = theta
    return theta, False, max_iter


def extreme_eigenvalues(A: SparseMatrixCsr, rel_tol: float = 1e-10,
                        max_iter: int = 1000) -> SpectrumEstimate:
    """Estimate ``lambda_min``, ``lambda_max`` and the condition number of SPD ``A``.

    A partial estimate with ``converged=False`` is returned if either
    iteration runs out of steps.
    """
    lmax, ok_max, it_max = lanczos_max(A, rel_tol, max_iter)
    lmin, ok_min, it_min = inverse_iteration_min(A, rel_tol, max_iter)
    if lmin > lmax:
        lmin, lmax = lmax, lmin
    return SpectrumEstimate(lmin, lmax, ok_max and ok_min, it_max + it_min)
