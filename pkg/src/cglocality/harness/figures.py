"""Pinned scenarios behind every reproduction target.

Budgets and snapshot sets that the figures leave implicit are fixed here;
README.md carries the same table.  Bump ``TABLE_VERSION`` when a pin changes.
"""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

import numpy as np

from ..errors import ConfigError
from ..problems import build_2d, reference_solve
from ..preconditioners import PreconditionerSpec
from .config import ProblemConfig, ScenarioConfig, SolverSettings
from .runner import OutputBundle, plot_script, run_scenario, write_summary, write_vector_csv

TABLE_VERSION = 1

_1D = ProblemConfig("1d", 64, None, 2.0, 0.0)


def _cg(budget=64, **kw):
    return SolverSettings(method="cg", max_iter=budget, mode="fixed_budget", **kw)


def _scenario(problem=_1D, solver=None, **kw):
    return ScenarioConfig(problem=problem, solver=solver or _cg(), **kw)


def _table():
    base = _scenario(bounds=True)
    f10 = replace(_1D, f_const=10.0)
    g8 = replace(_1D, gamma=8.0)
    lvl = lambda L: PreconditionerSpec() if L == 0 else PreconditionerSpec("hierarchical", L)
    stat = lambda method, budget, **kw: SolverSettings(method=method, max_iter=budget,
                                                       mode="fixed_budget", **kw)
    gm = lambda restart, budget: SolverSettings(method="gmres", max_iter=budget,
                                                mode="fixed_budget", restart_len=restart)
    t = {
        "fig1": {"series": {"cg": base}, "logscale": False},
        "fig2": {"series": {"cg": base}},
        "fig3": {"series": {"cg": replace(base, snapshots=(1, 3, 7, 15, 31, 63))}},
        "fig4": {"series": {"cg": _scenario(f10)}},
        "fig5": {"series": {"cg": _scenario(f10, snapshots=(5, 10, 15, 32, 48, 63, 64))}},
        "fig6": {"series": {"cg": _scenario(initial_guess="analytic_family(0.7)",
                                            snapshots=(1, 8, 16, 32, 48, 63, 64))}},
        "fig7": {"series": {"cg": _scenario(g8, bounds=True)}},
        "fig8": {"series": {"cg": _scenario(g8, snapshots=(1, 3, 7, 15, 31, 63))}},
        "fig9": {"series": {m: _scenario(solver=stat(m, 2048))
                            for m in ("gs_forward", "gs_backward", "jacobi")}},
        "fig10": {"series": {m: _scenario(solver=stat(m, 2047),
                                          snapshots=(1, 16, 64, 256, 1024, 2047))
                             for m in ("gs_forward", "gs_backward")}},
        "fig11": {"series": {f"omega={w}": _scenario(solver=stat("sor", 2500, omega=w))
                             for w in (1.0, 1.5, 1.8, 1.9, 1.95)}},
        "fig12": {"series": {"gmres": _scenario(solver=gm(0, 64),
                                                snapshots=(1, 3, 7, 15, 31, 63))}},
        "fig13": {"series": {f"restart={r}": _scenario(solver=gm(r, 180)) for r in (0, 16, 32)}},
        "fig14": {"field": "exact", "m": 32, "n": 8},
        "fig15": {"field": "error", "m": 32, "n": 8},
        "fig16": {"series": {"cg": _scenario(ProblemConfig("2d", 8, 32), _cg(19), snapshots=(19,))}},
        "fig17": {"series": {f"m={m}": _scenario(ProblemConfig("2d", 16, m),
                                                 SolverSettings(method="cg", tol=1e-13,
                                                                max_iter=m + 200))
                             for m in (4, 8, 16, 32, 128, 256, 384)}},
        "fig18": {"series": {f"L={L}": _scenario(preconditioner=lvl(L),
                                                 snapshots=(8, 16, 24, 33, 64))
                             for L in (0, 1)}},
        "fig19": {"series": {f"L={L}": _scenario(solver=_cg(13), preconditioner=lvl(L),
                                                 snapshots=(11, 13))
                             for L in (0, 1, 2, 3)}},
        "fig20": {"series": {f"L={L}": _scenario(preconditioner=lvl(L)) for L in (0, 1, 2, 3)}},
    }
    return t


FIGURES = _table()


def figure_targets():
    return sorted(FIGURES, key=lambda s: int(s[3:]))


def _field_bundle(entry, out: Path, target) -> OutputBundle:
    problem = build_2d(entry["m"], entry["n"])
    exact = problem.exact()
    out.mkdir(parents=True, exist_ok=True)
    if entry["field"] == "exact":
        cols = {"exact": exact}
    else:
        ref = reference_solve(problem)
        cols = {"error": ref - exact, "reference": ref, "exact": exact}
    path = write_vector_csv(out / f"{entry['field']}.csv", problem, cols)
    column = list(cols)[0]
    summary = {"label": f"{target} {problem.label} {entry['field']} field",
               "max_abs": float(np.max(np.abs(cols[column])))}
    write_summary(out / "summary.txt", summary)
    (out / "plot.gp").write_text(
        "set datafile separator ','\n"
        "set xlabel 'x'\nset ylabel 'y'\n"
        f"splot '{path.name}' using (column('x')):(column('y')):(column('{column}')) "
        f"with points title '{column}'\n")
    return OutputBundle(out, summary=summary, files={column: path})


def reproduce(target: str, out_dir="repro") -> list:
    """Run the pinned scenarios for ``target`` and return their bundles."""
    if target not in FIGURES:
        raise ConfigError(f"unknown target '{target}'; valid targets: "
                          f"{', '.join(figure_targets())}", "target")
    entry = FIGURES[target]
    root = Path(out_dir) / target
    if "field" in entry:
        return [_field_bundle(entry, root, target)]
    bundles = []
    for name, cfg in entry["series"].items():
        cfg = replace(cfg, label=f"{target} {name}")
        bundles.append(run_scenario(cfg, root / name))
    series = []
    for b in bundles:
        series.append((f"{b.directory.name}/history.csv", "rel_residual",
                       f"{b.directory.name} residual"))
        series.append((f"{b.directory.name}/history.csv", "probe_error_0",
                       f"{b.directory.name} |e| at probe"))
    root.mkdir(parents=True, exist_ok=True)
    (root / "plot.gp").write_text(plot_script(target, series, entry.get("logscale", True)))
    return bundles
