"""Locality and convergence diagnostics."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .graph import bfs_distances

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundCurve:
    kappa: float
    C: float
    values: np.ndarray

    @property
    def factor(self) -> float:
        s = math.sqrt(self.kappa)
        return (s - 1.0) / (s + 1.0)


@dataclass(frozen=True)
class FrontTrace:
    front_position: np.ndarray
    untouched_set_size: np.ndarray


def front_position(u, baseline, ordering=None, tol: float = 0.0) -> int:
    """Length of the longest prefix of ``ordering`` where ``u`` still equals ``baseline``."""
    u = np.asarray(u, dtype=float)
    baseline = np.asarray(baseline, dtype=float)
    if u.shape != baseline.shape:
        raise ValueError("u and baseline differ in length")
    n = u.size
    if ordering is None:
        ordering = np.arange(n)
    else:
        ordering = np.asarray(ordering)
        if ordering.shape != (n,) or not np.array_equal(np.sort(ordering), np.arange(n)):
            raise ValueError("ordering must be a permutation of range(n)")
    moved = np.abs(u[ordering] - baseline[ordering]) > tol
    hits = np.flatnonzero(moved)
    return int(hits[0]) if hits.size else n


def untouched_count(u, baseline, tol: float = 0.0) -> int:
    return int(np.count_nonzero(np.abs(np.asarray(u) - np.asarray(baseline)) <= tol))


def front_trace(iterates, baseline, ordering=None, tol=0.0) -> FrontTrace:
    fp = [front_position(u, baseline, ordering, tol) for u in iterates]
    un = [untouched_count(u, baseline, tol) for u in iterates]
    return FrontTrace(np.array(fp), np.array(un))


def locality_lower_bound(A, rhs_support, probe: int):
    """Smallest iteration count at which a zero-start Krylov iterate can be nonzero at ``probe``.

    Returns ``inf`` if the probe cannot be reached from the support.
    """
    dist = bfs_distances(A, rhs_support)
    d = dist[probe]
    if math.isinf(d):
        log.warning("probe %d is unreachable from the right-hand side support", probe)
        return math.inf
    return int(d) + 1


def distance_histogram(u, baseline, distances, tol: float = 0.0) -> dict:
    """Per graph distance: ``(touched, untouched)`` node counts."""
    moved = np.abs(np.asarray(u) - np.asarray(baseline)) > tol
    out = {}
    for d in np.unique(distances[np.isfinite(distances)]).astype(int):
        sel = distances == d
        t = int(np.count_nonzero(moved[sel]))
        out[int(d)] = (t, int(np.count_nonzero(sel)) - t)
    return out


def cg_bound_curve(kappa: float, C: float, k_max: int) -> BoundCurve:
    """Tabulate ``C * ((sqrt(kappa) - 1) / (sqrt(kappa) + 1))**k`` for ``k = 0..k_max``."""
    if not kappa >= 1:
        raise ValueError("kappa must be >= 1")
    if not C > 0:
        raise ValueError("C must be > 0")
    s = math.sqrt(kappa)
    q = (s - 1.0) / (s + 1.0)
    values = C * q ** np.arange(k_max + 1, dtype=float)
    return BoundCurve(float(kappa), float(C), values)


def iteration_count_bound(kappa: float, epsilon: float) -> int:
    """Iterations that suffice to reduce the energy-norm error by ``epsilon``."""
    if not kappa >= 1:
        raise ValueError("kappa must be >= 1")
    if not 0 < epsilon < 2:
        raise ValueError("epsilon must lie in (0, 2)")
    return math.ceil(0.5 * math.sqrt(kappa) * math.log(2.0 / epsilon))


def probe_error(u, problem, probe: int) -> float:
    """Signed pointwise error ``exact - u`` at ``probe``."""
    if not 0 <= probe < problem.n:
        raise IndexError(f"probe {probe} outside 0..{problem.n - 1}")
    return problem.analytic(probe) - float(u[probe])


def asymptotic_factor(history, window: int) -> float:
    """Geometric mean per-step reduction over the last ``window`` entries."""
    h = np.asarray(history, dtype=float)
    if h.size <= window:
        raise ValueError("history shorter than window")
    return float((h[-1] / h[-1 - window]) ** (1.0 / window))
