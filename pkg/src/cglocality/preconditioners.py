"""Hierarchical row transforms and the preconditioner ``C = T^T T``.

Level ``l`` adds half of the rows ``i - 2**(l-1)`` and ``i + 2**(l-1)`` to
every row ``i`` that is a multiple of ``2**l``.  Rows are addressed by their
global index at every level, so coarse levels never renumber unknowns.
The composite transform is ``T = T_L ... T_1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, SizeGuardError
from .sparse import SparseMatrixCsr, assemble_csr, spmv, to_dense, transpose
from .spectrum import SpectrumEstimate

EXPLICIT_LIMIT = 1024


@dataclass(frozen=True, eq=False)
class HierarchicalTransform:
    n: int
    levels: int
    factors: tuple
    _transposes: tuple = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_transposes", tuple(transpose(T) for T in self.factors))

    def apply_T(self, x):
        for T in self.factors:
            x = spmv(T, x)
        return x

    def apply_Tt(self, x):
        for Tt in reversed(self._transposes):
            x = spmv(Tt, x)
        return x

    def composite(self) -> np.ndarray:
        """Dense ``T_L ... T_1``; desk scale only."""
        M = np.eye(self.n)
        for T in self.factors:
            M = to_dense(T) @ M
        return M

    def __call__(self, r):
        return apply_C(self, r)


@dataclass(frozen=True)
class PreconditionerSpec:
    kind: str = "identity"
    levels: int = 0

    def __post_init__(self):
        if self.kind not in ("identity", "hierarchical"):
            raise ValueError(f"unknown preconditioner kind '{self.kind}'")

    def build(self, n):
        """Return a callable ``r -> C r`` or ``None`` for the identity."""
        if self.kind == "identity":
            return None
        return build_hierarchical(n, self.levels)


def _log2_exact(n):
    p = n.bit_length() - 1
    return p if n > 0 and (1 << p) == n else None


def build_hierarchical(n: int, levels: int) -> HierarchicalTransform:
    p = _log2_exact(n)
    if p is None or p < 2:
        raise ValueError(f"hierarchical transform needs n = 2**p with p >= 2, got n={n}")
    if not 1 <= levels <= p - 1:
        raise ValueError(f"levels must lie in 1..{p - 1} for n={n}, got {levels}")
    factors = []
    diag = np.arange(n)
    for level in range(1, levels + 1):
        step = 1 << level
        half = step >> 1
        active = np.arange(0, n, step)
        rows, cols = [diag], [diag]
        for offset in (-half, half):
            nb = active + offset
            ok = (nb >= 0) & (nb < n)
            rows.append(active[ok])
            cols.append(nb[ok])
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        v = np.where(r == c, 1.0, 0.5)
        factors.append(assemble_csr(n, n, (r, c, v)))
    return HierarchicalTransform(n, levels, tuple(factors))


def identity_transform(n: int) -> HierarchicalTransform:
    """Zero-level transform; ``apply_C`` is the identity."""
    return HierarchicalTransform(n, 0, ())


def apply_C(t: HierarchicalTransform, r) -> np.ndarray:
    """``T_1^T ... T_L^T T_L ... T_1 r`` through ``2 L`` sparse products."""
    r = np.asarray(r, dtype=float)
    if r.shape != (t.n,):
        raise DimensionError(f"vector of length {r.shape} does not match n={t.n}")
    if not t.factors:
        return r.copy()
    return t.apply_Tt(t.apply_T(r))


def explicit_transformed_matrix(t: HierarchicalTransform, A: SparseMatrixCsr,
                                limit: int = EXPLICIT_LIMIT) -> np.ndarray:
    """Dense ``T A T^T``."""
    if A.shape != (t.n, t.n):
        raise DimensionError("transform and matrix sizes differ")
    if t.n > limit:
        raise SizeGuardError(f"explicit transform limited to n <= {limit}")
    T = t.composite()
    return T @ to_dense(A) @ T.T


def preconditioned_spectrum(t: HierarchicalTransform, A: SparseMatrixCsr,
                            measure: str = "norm", limit: int = EXPLICIT_LIMIT) -> SpectrumEstimate:
    """Condition number of the preconditioned operator.

    ``measure="norm"`` gives ``||C A||_2 ||(C A)^-1||_2`` from the singular
    values of the (nonsymmetric) product ``C A``.  ``measure="eigen"`` gives
    ``lambda_max / lambda_min`` of ``T A T^T``, which is similar to ``C A``.
    Both coincide when the transform is the identity.
    """
    if t.n > limit:
        raise SizeGuardError(f"explicit transform limited to n <= {limit}")
    if measure == "norm":
        T = t.composite()
        CA = T.T @ T @ to_dense(A)
        s = np.linalg.svd(CA, compute_uv=False)
        return SpectrumEstimate(float(s[-1]), float(s[0]), True, 0)
    if measure == "eigen":
        ev = np.linalg.eigvalsh(explicit_transformed_matrix(t, A, limit))
        return SpectrumEstimate(float(ev[0]), float(ev[-1]), True, 0)
    raise ValueError(f"unknown measure '{measure}'")
