"""Solver configuration and per-iteration telemetry."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..diagnostics import front_position, untouched_count
from ..sparse import norm2

MODES = ("converge", "fixed_budget")


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-8
    max_iter: int = 1000
    mode: str = "converge"
    rho: float = 1.0
    omega: float = 1.0
    restart_len: int = 0
    check_symmetry: bool = True

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be > 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if not 0 < self.rho <= 1:
            raise ValueError("rho must lie in (0, 1]")
        if not 0 < self.omega < 2:
            raise ValueError("omega must lie in (0, 2)")
        if self.restart_len < 0:
            raise ValueError("restart_len must be >= 0")

    @property
    def fixed_budget(self) -> bool:
        return self.mode == "fixed_budget"


@dataclass
class IterationRecord:
    k: int
    residual_norm: float
    rel_residual: float
    error_norm_vs_reference: Optional[float] = None
    probe_errors: dict = field(default_factory=dict)
    front_position: Optional[int] = None
    untouched: Optional[int] = None
    iterate_snapshot: Optional[np.ndarray] = None


@dataclass
class SolveReport:
    records: list
    final_iterate: np.ndarray
    converged: bool
    iterations: int
    stop_reason: str
    message: str = ""

    def column(self, name):
        return np.array([getattr(r, name) for r in self.records], dtype=float)

    def probe_history(self, probe=None):
        if probe is None:
            probe = next(iter(self.records[0].probe_errors))
        return np.array([r.probe_errors[probe] for r in self.records])

    def snapshots(self) -> dict:
        return {r.k: r.iterate_snapshot for r in self.records if r.iterate_snapshot is not None}


Observer = Callable[[IterationRecord], None]


class Telemetry:
    """Turns raw solver state into :class:`IterationRecord` objects.

    Parameters
    ----------
    probes : dict, optional
        Probe index -> exact value; the record stores ``exact - u[probe]``.
    reference : ndarray, optional
        Discrete reference solution for the Euclidean error norm.
    baseline : ndarray, optional
        Vector the iterate is compared against for front tracking, usually
        the initial guess.
    ordering : sequence, optional
        Node order for :func:`front_position`; without it only the untouched
        count is recorded.
    snapshots : iterable of int
        Iteration indices whose iterate is kept.
    observer : callable, optional
        Called with every record as soon as it is produced.
    """

    def __init__(self, probes=None, reference=None, baseline=None, ordering=None,
                 snapshots=(), observer: Optional[Observer] = None, keep_final=False):
        self.probes = dict(probes or {})
        self.reference = None if reference is None else np.asarray(reference, dtype=float)
        self.baseline = None if baseline is None else np.asarray(baseline, dtype=float)
        self.ordering = None if ordering is None else np.asarray(ordering)
        self.snapshots = frozenset(int(k) for k in snapshots)
        self.observer = observer
        self.scale = math.nan

    def start(self, b, r0_norm):
        bn = norm2(b)
        self.scale = bn if bn > 0 else (r0_norm if r0_norm > 0 else 1.0)

    def record(self, k, u, residual_norm) -> IterationRecord:
        rec = IterationRecord(k, float(residual_norm), float(residual_norm) / self.scale)
        if self.reference is not None:
            rec.error_norm_vs_reference = norm2(self.reference - u)
        for p, exact in self.probes.items():
            rec.probe_errors[p] = exact - float(u[p])
        if self.baseline is not None:
            rec.untouched = untouched_count(u, self.baseline)
            if self.ordering is not None:
                rec.front_position = front_position(u, self.baseline, self.ordering)
        if k in self.snapshots:
            rec.iterate_snapshot = np.array(u, copy=True)
        if self.observer is not None:
            self.observer(rec)
        return rec


def default_telemetry():
    return Telemetry()
