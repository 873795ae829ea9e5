"""Iterative-solver laboratory for studying how far information travels per iteration."""

from .diagnostics import (cg_bound_curve, front_position, iteration_count_bound,
                          locality_lower_bound, probe_error)
from .graph import bfs_distances, graph_diameter
from .mmio import read_matrix_market, write_matrix_market
from .preconditioners import (HierarchicalTransform, PreconditionerSpec, apply_C,
                              build_hierarchical, explicit_transformed_matrix,
                              preconditioned_spectrum)
from .problems import (ProblemInstance, analytic_1d, analytic_2d, build_1d, build_2d,
                       initial_guess, reference_solve)
from .solvers import (SolveReport, SolverConfig, Telemetry, cg_solve, gmres_solve,
                      stationary_solve)
from .sparse import (SparseMatrixCsr, assemble_csr, axpy, dot, is_symmetric, norm2, spmv,
                     to_dense, transpose)
from .spectrum import SpectrumEstimate, extreme_eigenvalues

__version__ = "0.1.0"
