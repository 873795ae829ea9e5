"""Discretized model problems.

Two families are generated:

* 1D reaction-diffusion ``-u'' + gamma^2 u = gamma^2 f_const`` on (0, 1) with
  ``u'(0) = 0`` and ``u(1) = c_r``; the solution is ``f_const + cosh(gamma x)``.
* 2D Laplace on the unit square with ``u = sin(pi y) cosh(pi)`` at ``x = 1``,
  homogeneous Dirichlet data at ``y = 0, 1`` and a Neumann edge at ``x = 0``.

Dirichlet nodes are eliminated and the Neumann rows are halved so the
matrices stay symmetric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Union

import numpy as np
import scipy.linalg as sla

from .errors import DimensionError
from .mmio import write_matrix_market
from .sparse import DENSE_LIMIT, SparseMatrixCsr, assemble_csr, identity, lower_band, norm2, spmv


@dataclass(frozen=True)
class Grid1D:
    n: int
    gamma: float

    @property
    def h(self) -> float:
        return 1.0 / self.n

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.n) * self.h


@dataclass(frozen=True)
class Grid2D:
    """Unknowns ``(i, j)``, ``i = 0..m-1`` fastest, ``j = 1..n-1``."""

    m: int
    n: int

    @property
    def hx(self) -> float:
        return 1.0 / self.m

    @property
    def hy(self) -> float:
        return 1.0 / self.n

    @property
    def size(self) -> int:
        return self.m * (self.n - 1)

    def index(self, i, j):
        return (j - 1) * self.m + i

    def node(self, k):
        """Inverse of :meth:`index`."""
        return k % self.m, k // self.m + 1

    def coordinates(self):
        i, j = self.node(np.arange(self.size))
        return i * self.hx, j * self.hy


@dataclass(frozen=True)
class IdentityGrid:
    n: int


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    matrix: SparseMatrixCsr
    rhs: np.ndarray
    grid: Union[Grid1D, Grid2D, IdentityGrid]
    analytic: Callable[[int], float]
    probes: tuple
    label: str
    f_const: float = 0.0
    c_r: float = math.nan
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.matrix.n_rows

    @property
    def kind(self) -> str:
        if isinstance(self.grid, Grid1D):
            return "1d"
        if isinstance(self.grid, Grid2D):
            return "2d"
        return "identity"

    def exact(self) -> np.ndarray:
        """Analytic solution sampled at every unknown."""
        return np.array([self.analytic(k) for k in range(self.n)])

    def coordinates(self):
        if isinstance(self.grid, Grid1D):
            return (self.grid.x,)
        if isinstance(self.grid, Grid2D):
            return self.grid.coordinates()
        return (np.arange(self.n, dtype=float),)

    def metadata(self) -> dict:
        md = {"kind": self.kind, "label": self.label, "n": self.grid.n}
        if isinstance(self.grid, Grid2D):
            md["m"] = self.grid.m
        if isinstance(self.grid, Grid1D):
            md["gamma"] = self.grid.gamma
        md["f_const"] = self.f_const
        md["c_r"] = self.c_r
        md["probes"] = ",".join(str(p) for p in self.probes)
        md.update(self.meta)
        return md


def analytic_1d(x, gamma: float, f_const: float = 0.0):
    """Exact solution ``f_const + cosh(gamma x)`` of the 1D model problem."""
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    if gamma == 0 and f_const != 0:
        raise ValueError("constant forcing needs gamma > 0")
    return f_const + np.cosh(gamma * np.asarray(x, dtype=float))


def build_1d(n: int, gamma: float, f_const: float = 0.0) -> ProblemInstance:
    """Tridiagonal system for the 1D problem on ``n`` unknowns, ``h = 1/n``.

    The source term is ``gamma**2 * f_const`` so that the exact solution is
    ``f_const + cosh(gamma x)``; ``c_r`` is set to that solution at ``x = 1``.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    if f_const < 0:
        raise ValueError(f"f_const must be >= 0, got {f_const}")
    grid = Grid1D(n, float(gamma))
    h = grid.h
    inv_h2 = 1.0 / (h * h)
    d = 2.0 + gamma * gamma * h * h
    c_r = float(analytic_1d(1.0, gamma, f_const))

    idx = np.arange(n)
    diag = np.full(n, d * inv_h2)
    diag[0] = 0.5 * d * inv_h2
    off = np.full(n - 1, -inv_h2)
    rows = np.concatenate((idx, idx[:-1], idx[1:]))
    cols = np.concatenate((idx, idx[1:], idx[:-1]))
    A = assemble_csr(n, n, (rows, cols, np.concatenate((diag, off, off))))

    source = gamma * gamma * f_const
    b = np.full(n, source)
    b[0] = 0.5 * source
    b[-1] += c_r * inv_h2

    x = grid.x

    def analytic(k):
        return float(analytic_1d(x[k], gamma, f_const))

    label = f"1d n={n} gamma={gamma:g} f={f_const:g}"
    return ProblemInstance(A, b, grid, analytic, (0,), label, float(f_const), c_r)


def analytic_2d(x, y):
    return np.sin(np.pi * np.asarray(y, dtype=float)) * np.cosh(np.pi * np.asarray(x, dtype=float))


def build_2d(m: int, n: int) -> ProblemInstance:
    """Five-point Laplacian on an ``m x n`` cell grid of the unit square."""
    if m < 2 or n < 2:
        raise ValueError(f"m and n must be >= 2, got m={m}, n={n}")
    grid = Grid2D(m, n)
    ax = 1.0 / grid.hx ** 2
    ay = 1.0 / grid.hy ** 2
    N = grid.size
    i, j = grid.node(np.arange(N))
    # x = 0 rows come from a ghost-point reflection and are halved
    s = np.where(i == 0, 0.5, 1.0)

    rows, cols, vals = [np.arange(N)], [np.arange(N)], [s * (2 * ax + 2 * ay)]
    k = np.arange(N)
    left = i > 0
    rows.append(k[left]); cols.append(k[left] - 1); vals.append(np.full(left.sum(), -ax))
    right = i < m - 1
    # ghost reflection doubles the (0 -> 1) coupling, halving brings it back to -ax
    rows.append(k[right]); cols.append(k[right] + 1); vals.append(np.full(right.sum(), -ax))
    down = j > 1
    rows.append(k[down]); cols.append(k[down] - m); vals.append(-s[down] * ay)
    up = j < n - 1
    rows.append(k[up]); cols.append(k[up] + m); vals.append(-s[up] * ay)
    A = assemble_csr(N, N, (np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)))

    b = np.zeros(N)
    edge = i == m - 1
    b[edge] = analytic_2d(1.0, j[edge] * grid.hy) * ax

    xs, ys = grid.coordinates()

    def analytic(kk):
        return float(analytic_2d(xs[kk], ys[kk]))

    j_probe = min(range(1, n), key=lambda jj: (abs(jj * grid.hy - 0.5), jj))
    probe = grid.index(0, j_probe)
    label = f"2d m={m} n={n}"
    return ProblemInstance(A, b, grid, analytic, (probe,), label, 0.0, math.cosh(math.pi))


def build_identity(n: int) -> ProblemInstance:
    """``I u = 1``; a smoke-test problem with known one-step solution."""
    return ProblemInstance(identity(n), np.ones(n), IdentityGrid(n), lambda k: 1.0,
                           (0,), f"identity n={n}")


def initial_guess(problem: ProblemInstance, kind: str = "zero", gamma0=None) -> np.ndarray:
    """``"zero"`` or ``"analytic_family"`` (samples ``cosh(gamma0 x)``, 1D only)."""
    if kind == "zero":
        return np.zeros(problem.n)
    if kind == "analytic_family":
        if not isinstance(problem.grid, Grid1D):
            raise ValueError("analytic_family initial guess is only defined for 1D problems")
        if gamma0 is None:
            raise ValueError("analytic_family needs gamma0")
        return np.cosh(gamma0 * problem.grid.x)
    raise ValueError(f"unknown initial guess kind '{kind}'")


def thomas_solve(lower, diag, upper, rhs) -> np.ndarray:
    """Tridiagonal solve; ``lower[k]`` sits at ``(k+1, k)``, ``upper[k]`` at ``(k, k+1)``."""
    n = len(diag)
    c = np.empty(n)
    d = np.empty(n)
    piv = diag[0]
    if piv == 0:
        raise ZeroDivisionError("zero pivot in row 0")
    c[0] = upper[0] / piv if n > 1 else 0.0
    d[0] = rhs[0] / piv
    for k in range(1, n):
        piv = diag[k] - lower[k - 1] * c[k - 1]
        if piv == 0:
            raise ZeroDivisionError(f"zero pivot in row {k}")
        c[k] = upper[k] / piv if k < n - 1 else 0.0
        d[k] = (rhs[k] - lower[k - 1] * d[k - 1]) / piv
    x = np.empty(n)
    x[-1] = d[-1]
    for k in range(n - 2, -1, -1):
        x[k] = d[k] - c[k] * x[k + 1]
    return x


def _tridiagonal_parts(A: SparseMatrixCsr):
    if np.any(np.abs(A.row_ids - A.col_indices) > 1):
        raise DimensionError("matrix is not tridiagonal")
    n = A.n_rows
    M = {(r, c): v for r, c, v in zip(A.row_ids.tolist(), A.col_indices.tolist(), A.values.tolist())}
    diag = np.array([M.get((k, k), 0.0) for k in range(n)])
    lower = np.array([M.get((k + 1, k), 0.0) for k in range(n - 1)])
    upper = np.array([M.get((k, k + 1), 0.0) for k in range(n - 1)])
    return lower, diag, upper


def reference_solve(problem: ProblemInstance, limit: int = DENSE_LIMIT) -> np.ndarray:
    """Direct solve: Thomas for 1D, banded Cholesky otherwise."""
    A, b = problem.matrix, problem.rhs
    if isinstance(problem.grid, (Grid1D, IdentityGrid)):
        x = thomas_solve(*_tridiagonal_parts(A), b)
    else:
        ab = lower_band(A, limit)
        x = sla.cho_solve_banded((sla.cholesky_banded(ab, lower=True), True), b)
    res = norm2(b - spmv(A, x))
    if res > 1e-12 * norm2(b):
        raise ArithmeticError(f"reference solve residual {res:.3e} too large")
    return x


def write_problem(problem: ProblemInstance, directory) -> dict:
    """Export ``matrix.mtx``, ``rhs.mtx`` (n x 1) and ``metadata.txt``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    write_matrix_market(problem.matrix, directory / "matrix.mtx", comment=problem.label)
    nz = np.flatnonzero(problem.rhs)
    rhs = assemble_csr(problem.n, 1, (nz, np.zeros_like(nz), problem.rhs[nz]))
    write_matrix_market(rhs, directory / "rhs.mtx")
    md = problem.metadata()
    (directory / "metadata.txt").write_text("".join(f"{k}={v!r}\n" if isinstance(v, float)
                                                    else f"{k}={v}\n" for k, v in md.items()))
    return {"matrix": directory / "matrix.mtx", "rhs": directory / "rhs.mtx",
            "metadata": directory / "metadata.txt"}


def read_metadata(path) -> dict:
    md = {}
    for line in Path(path).read_text().splitlines():
        if "=" in line:
            k, v = line.split("=", 1)
            md[k.strip()] = v.strip()
    return md
