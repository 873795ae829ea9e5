"""Iterative solvers sharing the :class:`Telemetry` record contract."""

from .cg import cg_solve
from .gmres import gmres_solve
from .records import IterationRecord, SolveReport, SolverConfig, Telemetry
from .stationary import METHODS as STATIONARY_METHODS
from .stationary import stationary_solve

__all__ = [
    "cg_solve", "gmres_solve", "stationary_solve", "STATIONARY_METHODS",
    "IterationRecord", "SolveReport", "SolverConfig", "Telemetry",
]
