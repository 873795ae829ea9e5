"""Graph view of a sparse matrix: BFS distances and exact diameter.

The graph has one node per unknown and an undirected edge wherever
``A[i, j]`` or ``A[j, i]`` is stored off the diagonal.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import DimensionError, DisconnectedGraphError
from .sparse import SparseMatrixCsr, transpose

log = logging.getLogger(__name__)

UNREACHABLE = math.inf
DIAMETER_HARD_LIMIT = 100_000
DIAMETER_WARN_LIMIT = 10_000


def adjacency(A: SparseMatrixCsr):
    """Symmetrized off-diagonal pattern as ``(offsets, neighbors)``."""
    if A.n_rows != A.n_cols:
        raise DimensionError("graph view needs a square matrix")
    At = transpose(A)
    rows = np.concatenate((A.row_ids, At.row_ids))
    cols = np.concatenate((A.col_indices, At.col_indices))
    off = rows != cols
    rows, cols = rows[off], cols[off]
    keys = np.unique(rows * A.n_rows + cols)
    rows, cols = keys // A.n_rows, keys % A.n_rows
    offsets = np.concatenate(([0], np.cumsum(np.bincount(rows, minlength=A.n_rows))))
    return offsets, cols


def bfs_distances(A: SparseMatrixCsr, sources) -> np.ndarray:
    """Hop distance from the nearest source; unreachable nodes get ``inf``."""
    sources = np.unique(np.asarray(list(sources), dtype=np.int64))
    if sources.size == 0:
        raise ValueError("bfs_distances needs at least one source")
    if sources.min() < 0 or sources.max() >= A.n_rows:
        raise IndexError("source index out of range")
    offsets, nbrs = adjacency(A)
    n = A.n_rows
    dist = np.full(n, UNREACHABLE)
    dist[sources] = 0
    frontier = sources
    level = 0
    while frontier.size:
        level += 1
        starts, stops = offsets[frontier], offsets[frontier + 1]
        lengths = stops - starts
        if lengths.sum() == 0:
            break
        idx = np.repeat(starts - np.cumsum(np.concatenate(([0], lengths[:-1]))), lengths)
        cand = nbrs[idx + np.arange(lengths.sum())]
        cand = np.unique(cand[np.isinf(dist[cand])])
        dist[cand] = level
        frontier = cand
    return dist


def _scipy_graph(A: SparseMatrixCsr):
    offsets, nbrs = adjacency(A)
    n = A.n_rows
    return csr_matrix((np.ones(nbrs.size), nbrs, offsets), shape=(n, n))


def component_count(A: SparseMatrixCsr) -> int:
    n, _ = connected_components(_scipy_graph(A), directed=False)
    return int(n)


def graph_diameter(A: SparseMatrixCsr, chunk: int = 256) -> int:
    """Exact diameter by all-pairs BFS.

    Rows are processed in chunks so memory stays at ``chunk * n``.
    """
    n = A.n_rows
    if n > DIAMETER_HARD_LIMIT:
        raise ValueError(f"graph_diameter limited to n <= {DIAMETER_HARD_LIMIT}, got {n}")
    if n > DIAMETER_WARN_LIMIT:
        log.warning("all-pairs BFS on %d nodes may be slow", n)
    G = _scipy_graph(A)
    n_comp, _ = connected_components(G, directed=False)
    if n_comp > 1:
        raise DisconnectedGraphError(f"graph has {n_comp} connected components", n_comp)
    best = 0
    for lo in range(0, n, chunk):
        d = shortest_path(G, method="D", unweighted=True, directed=False,
                          indices=np.arange(lo, min(lo + chunk, n)))
        best = max(best, int(d.max()))
    return best
