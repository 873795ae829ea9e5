"""Execute scenarios and write their output bundles.

A bundle directory holds::

    history.csv      one row per recorded iteration
    snapshots/       k_XXXX.csv for every retained iterate
    exact.csv        analytic and reference solution at every node
    summary.txt      key=value run summary
    plot.gp          gnuplot script for the history
    config.txt       the scenario that produced the bundle
    matrix.mtx, rhs.mtx, metadata.txt   the problem as Matrix Market
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from ..diagnostics import cg_bound_curve, locality_lower_bound
from ..errors import ConfigError, DisconnectedGraphError, LabError
from ..graph import graph_diameter
from ..problems import (build_1d, build_2d, build_identity, initial_guess, reference_solve,
                        write_problem)
from ..solvers import SolveReport, Telemetry, cg_solve, gmres_solve, stationary_solve
from ..spectrum import extreme_eigenvalues
from .config import ScenarioConfig

log = logging.getLogger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_BUDGET = 0, 1, 2


@dataclass
class OutputBundle:
    directory: Path
    config: Optional[ScenarioConfig] = None
    report: Optional[SolveReport] = None
    summary: dict = field(default_factory=dict)
    files: dict = field(default_factory=dict)
    exit_code: int = EXIT_OK

    @property
    def history(self) -> Path:
        return self.directory / "history.csv"


def build_problem(cfg: ScenarioConfig):
    p = cfg.problem
    try:
        if p.kind == "1d":
            return build_1d(p.n, p.gamma, p.f_const)
        if p.kind == "2d":
            return build_2d(p.m, p.n)
        return build_identity(p.n)
    except ValueError as exc:
        raise ConfigError(str(exc), "problem") from None


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return ""
    return format(v, ".17g")


def history_header(n_probes: int) -> list:
    return (["k", "residual_norm", "rel_residual", "error_norm"]
            + [f"probe_error_{i}" for i in range(n_probes)] + ["front_position"])


def write_history(path, report: SolveReport, probes) -> Path:
    lines = [",".join(history_header(len(probes)))]
    for r in report.records:
        row = [r.k, r.residual_norm, r.rel_residual, r.error_norm_vs_reference]
        row += [r.probe_errors.get(p) for p in probes]
        row.append(r.front_position)
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")
    return Path(path)


def _coord_columns(problem):
    coords = problem.coordinates()
    names = ["x", "y"][: len(coords)]
    return names, coords


def write_vector_csv(path, problem, columns: dict) -> Path:
    names, coords = _coord_columns(problem)
    header = ["index"] + names + list(columns)
    lines = [",".join(header)]
    cols = list(columns.values())
    for k in range(problem.n):
        row = [k] + [c[k] for c in coords] + [c[k] for c in cols]
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")
    return Path(path)


def write_summary(path, summary: dict) -> Path:
    Path(path).write_text("".join(f"{k}={_fmt(v) if isinstance(v, float) else v}\n"
                                  for k, v in summary.items()))
    return Path(path)


def read_summary(path) -> dict:
    out = {}
    for line in Path(path).read_text().splitlines():
        if "=" in line:
            k, v = line.split("=", 1)
            out[k] = v
    return out


def plot_script(title, series, logscale=True, ylabel="normalized residual") -> str:
    """gnuplot script; ``series`` is a list of ``(csv_path, column_name, label)``."""
    lines = [
        "set datafile separator ','",
        "set key outside right",
        "set xlabel 'iteration k'",
        f"set ylabel '{ylabel}'",
        f"set title '{title}'",
    ]
    if logscale:
        lines.append("set logscale y")
        lines.append("set format y '10^{%L}'")
    parts = []
    for path, column, label in series:
        y = f"(abs(column('{column}')))" if column.startswith("probe_error") else f"(column('{column}'))"
        parts.append(f"'{path}' using (column('k')):{y} with linespoints title '{label}'")
    lines.append("plot " + ", \\\n     ".join(parts))
    return "\n".join(lines) + "\n"


def run_scenario(cfg: ScenarioConfig, out_dir=None, snapshots=None,
                 export_problem=True) -> OutputBundle:
    """Build the problem, run the solver with full telemetry and write a bundle."""
    cfg = cfg.validate()
    if snapshots is not None:
        cfg = cfg.with_param("snapshots", tuple(snapshots))
    out = Path(out_dir if out_dir is not None else cfg.outputs)
    out.mkdir(parents=True, exist_ok=True)
    problem = build_problem(cfg)
    n = problem.n
    probes = problem.probes if cfg.probes == "default" else tuple(cfg.probes)
    kind, gamma0 = cfg.guess()
    x0 = initial_guess(problem, kind, gamma0)
    try:
        reference = reference_solve(problem)
    except LabError as exc:
        log.warning("no reference solution: %s", exc)
        reference = None

    ordering = np.arange(n) if problem.kind == "1d" else None
    tel = Telemetry(probes={p: problem.analytic(p) for p in probes}, reference=reference,
                    baseline=x0, ordering=ordering, snapshots=cfg.snapshots)
    scfg = cfg.solver_config()
    method = cfg.solver.method
    if method == "cg":
        precond = cfg.preconditioner.build(n)
        report = cg_solve(problem.matrix, problem.rhs, x0, scfg, precond, tel)
    elif method == "gmres":
        report = gmres_solve(problem.matrix, problem.rhs, x0, scfg, tel)
    else:
        report = stationary_solve(problem.matrix, problem.rhs, x0, method, scfg, tel)

    files = {"history": write_history(out / "history.csv", report, probes)}
    snap_dir = out / "snapshots"
    exact = problem.exact()
    for k, u in sorted(report.snapshots().items()):
        snap_dir.mkdir(exist_ok=True)
        files[f"snapshot_{k}"] = write_vector_csv(snap_dir / f"k_{k:04d}.csv", problem,
                                                  {"value": u, "exact": exact})
    cols = {"exact": exact}
    if reference is not None:
        cols["reference"] = reference
    files["exact"] = write_vector_csv(out / "exact.csv", problem, cols)
    if export_problem:
        files.update(write_problem(problem, out))
    (out / "config.txt").write_text(cfg.to_text())
    files["config"] = out / "config.txt"

    support = np.flatnonzero(problem.rhs != 0.0)
    summary = {
        "label": cfg.label or problem.label,
        "problem": problem.label,
        "method": method,
        "preconditioner": (cfg.preconditioner.kind if cfg.preconditioner.kind == "identity"
                           else f"hierarchical({cfg.preconditioner.levels})"),
        "n_unknowns": n,
        "probes": ",".join(str(p) for p in probes),
    }
    kappa = None
    if cfg.spectrum:
        est = extreme_eigenvalues(problem.matrix)
        kappa = est.kappa
        summary.update(kappa=est.kappa, lambda_min=est.lambda_min, lambda_max=est.lambda_max,
                       spectrum_converged=est.converged)
    if cfg.diameter:
        try:
            summary["diameter"] = graph_diameter(problem.matrix)
        except DisconnectedGraphError as exc:
            summary["diameter"] = f"inf ({exc.n_components} components)"
    if support.size:
        bound = locality_lower_bound(problem.matrix, support, probes[0])
        summary["locality_bound"] = bound if math.isinf(bound) else int(bound)
    summary.update(iterations=report.iterations, stop_reason=report.stop_reason,
                   converged=report.converged,
                   final_rel_residual=report.records[-1].rel_residual)
    if report.message:
        summary["message"] = report.message
    files["summary"] = write_summary(out / "summary.txt", summary)

    if cfg.bounds and kappa is not None:
        k_max = report.records[-1].k
        c1 = cg_bound_curve(kappa, 1.0, k_max).values
        ck = cg_bound_curve(kappa, math.sqrt(kappa), k_max).values
        lines = ["k,bound_C1,bound_sqrtkappa"]
        lines += [f"{k},{_fmt(a)},{_fmt(b)}" for k, (a, b) in enumerate(zip(c1, ck))]
        (out / "bounds.csv").write_text("\n".join(lines) + "\n")
        files["bounds"] = out / "bounds.csv"

    series = [("history.csv", "rel_residual", "normalized residual")]
    if reference is not None:
        series.append(("history.csv", "error_norm", "error norm"))
    series += [("history.csv", f"probe_error_{i}", f"|error| at probe {p}")
               for i, p in enumerate(probes)]
    if "bounds" in files:
        series += [("bounds.csv", "bound_C1", "bound C=1"),
                   ("bounds.csv", "bound_sqrtkappa", "bound C=sqrt(kappa)")]
    (out / "plot.gp").write_text(plot_script(summary["label"], series))
    files["plot"] = out / "plot.gp"

    if report.converged or (scfg.fixed_budget and report.stop_reason == "budget"):
        code = EXIT_OK
    elif report.stop_reason == "budget":
        code = EXIT_BUDGET
    else:
        code = EXIT_ERROR
    return OutputBundle(out, cfg, report, summary, files, code)


def _value_dir(parameter, value) -> str:
    return f"{parameter}={value}".replace("/", "_")


def sweep(base: ScenarioConfig, parameter: str, values, out_dir=None, **kwargs) -> list:
    """Run ``base`` once per value of ``parameter``; bundles go to value-stamped subdirectories."""
    root = Path(out_dir if out_dir is not None else base.outputs)
    configs = [(v, base.with_param(parameter, v).validate()) for v in values]
    bundles = []
    for v, cfg in configs:
        bundles.append(run_scenario(cfg, root / _value_dir(parameter, v), **kwargs))
    series = [(f"{b.directory.name}/history.csv", "rel_residual", b.directory.name) for b in bundles]
    (root / "plot.gp").write_text(plot_script(f"sweep over {parameter}", series))
    return bundles
