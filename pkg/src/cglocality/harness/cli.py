"""``cglocality`` command line.

Exit codes: 0 converged or complete, 2 iteration budget exhausted, 1 error.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

import numpy as np

from ..diagnostics import locality_lower_bound
from ..errors import DisconnectedGraphError, LabError, NotSPDError
from ..graph import graph_diameter
from ..mmio import read_matrix_market
from ..problems import build_1d, build_2d, build_identity, read_metadata, write_problem
from ..sparse import is_symmetric
from ..spectrum import extreme_eigenvalues
from .config import ConfigError, ScenarioConfig, load_config
from .figures import figure_targets, reproduce
from .runner import EXIT_BUDGET, EXIT_ERROR, EXIT_OK, run_scenario, sweep, write_summary

log = logging.getLogger("cglocality")


def _k_list(text):
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output directory")
    common.add_argument("--snapshots", type=_k_list, help="iterations to snapshot, e.g. 1,3,7")
    common.add_argument("--quiet", action="store_true", help="only report errors")

    p = argparse.ArgumentParser(prog="cglocality", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="write a model problem as Matrix Market")
    g.add_argument("--kind", choices=("1d", "2d", "identity"), default="1d")
    g.add_argument("--n", type=int, default=64)
    g.add_argument("--m", type=int)
    g.add_argument("--gamma", type=float, default=2.0)
    g.add_argument("--f-const", type=float, default=0.0)

    s = sub.add_parser("solve", parents=[common], help="run one scenario")
    s.add_argument("--config", required=True)

    r = sub.add_parser("reproduce", parents=[common], help="run the pinned scenarios of a figure")
    r.add_argument("target", help=", ".join(figure_targets()))

    w = sub.add_parser("sweep", parents=[common], help="run a scenario over parameter values")
    w.add_argument("--config", required=True)
    w.add_argument("--param", required=True, help="dotted name, e.g. solver.omega")
    w.add_argument("--values", required=True, help="comma-separated values")

    a = sub.add_parser("analyze", parents=[common], help="report kappa, diameter and locality bound")
    a.add_argument("matrix")
    a.add_argument("--rhs", help="n x 1 Matrix Market right-hand side (default: rhs.mtx beside the matrix)")
    a.add_argument("--probe", type=int, help="probe index (default: first probe in metadata.txt, else 0)")
    return p


def _echo(args, text):
    if not args.quiet:
        print(text)


def _report_bundle(args, bundle):
    s = bundle.summary
    _echo(args, f"{bundle.directory}: {s.get('label', '')} iterations={s.get('iterations')} "
                f"stop={s.get('stop_reason')} rel_residual={s.get('final_rel_residual', math.nan):.3e}")


def _generate(args):
    if args.kind == "1d":
        problem = build_1d(args.n, args.gamma, args.f_const)
    elif args.kind == "2d":
        if args.m is None:
            raise ConfigError("2d problems need --m", "m")
        problem = build_2d(args.m, args.n)
    else:
        problem = build_identity(args.n)
    out = Path(args.out or f"problem_{problem.label}")
    files = write_problem(problem, out)
    _echo(args, f"wrote {', '.join(str(f) for f in files.values())}")
    return EXIT_OK


def _solve(args):
    cfg = load_config(args.config)
    bundle = run_scenario(cfg, args.out, snapshots=args.snapshots)
    _report_bundle(args, bundle)
    return bundle.exit_code


def _reproduce(args):
    kw = {"out_dir": args.out} if args.out else {}
    bundles = reproduce(args.target, **kw)
    for b in bundles:
        _report_bundle(args, b)
    return max(b.exit_code for b in bundles)


def _sweep(args):
    cfg = load_config(args.config)
    values = [v.strip() for v in args.values.split(",") if v.strip()]
    bundles = sweep(cfg, args.param, values, args.out, snapshots=args.snapshots)
    for b in bundles:
        _report_bundle(args, b)
    return max(b.exit_code for b in bundles)


def _rhs_support(args, path, n):
    rhs_path = Path(args.rhs) if args.rhs else path.with_name("rhs.mtx")
    if not rhs_path.exists():
        return None
    R = read_matrix_market(rhs_path)
    if R.shape != (n, 1):
        raise LabError(f"{rhs_path}: right-hand side must be {n} x 1, got {R.shape}")
    return np.unique(R.row_ids)


def _analyze(args):
    path = Path(args.matrix)
    A = read_matrix_market(path)
    md_path = path.with_name("metadata.txt")
    md = read_metadata(md_path) if md_path.exists() else {}
    report = {"matrix": str(path), "n_rows": A.n_rows, "nnz": A.nnz}
    if A.n_rows == A.n_cols and is_symmetric(A, 1e-12 * float(np.max(np.abs(A.values), initial=0))):
        try:
            est = extreme_eigenvalues(A)
            report.update(kappa=est.kappa, lambda_min=est.lambda_min, lambda_max=est.lambda_max,
                          spectrum_converged=est.converged)
        except NotSPDError as exc:
            report["kappa"] = f"n/a ({exc})"
    else:
        report["kappa"] = "n/a (matrix not symmetric)"
    try:
        report["diameter"] = graph_diameter(A)
    except DisconnectedGraphError as exc:
        report["diameter"] = f"inf ({exc.n_components} components)"
    support = _rhs_support(args, path, A.n_rows)
    probe = args.probe
    if probe is None:
        probe = int(md["probes"].split(",")[0]) if md.get("probes") else 0
    if not 0 <= probe < A.n_rows:
        raise ConfigError(f"probe {probe} outside 0..{A.n_rows - 1}", "probe")
    report["probe"] = probe
    if support is not None and support.size:
        bound = locality_lower_bound(A, support, probe)
        report["locality_bound"] = bound if math.isinf(bound) else int(bound)
    else:
        report["locality_bound"] = "n/a (no right-hand side)"
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        write_summary(Path(args.out) / "analysis.txt", report)
    for k, v in report.items():
        _echo(args, f"{k}={v}")
    return EXIT_OK


_COMMANDS = {"generate": _generate, "solve": _solve, "reproduce": _reproduce,
             "sweep": _sweep, "analyze": _analyze}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except (LabError, ValueError, OSError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


__all__ = ["main", "EXIT_OK", "EXIT_ERROR", "EXIT_BUDGET", "ScenarioConfig"]
