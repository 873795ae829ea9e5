"""Scenario configuration in flat ``section.key=value`` text.

Example::

    # CG on the 1D model problem
    problem.kind = 1d
    problem.n = 64
    problem.gamma = 2
    solver.method = cg
    solver.mode = fixed_budget
    solver.max_iter = 64
    snapshots = 1,3,7,15,31,63
"""

from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..errors import ConfigError
from ..preconditioners import PreconditionerSpec

SOLVER_METHODS = ("cg", "gmres", "jacobi", "gs_forward", "gs_backward", "sor")
PROBLEM_KINDS = ("1d", "2d", "identity")

_GUESS_RE = re.compile(r"^analytic_family\(\s*([-+0-9.eE]+)\s*\)$")


@dataclass(frozen=True)
class ProblemConfig:
    kind: str = "1d"
    n: int = 64
    m: Optional[int] = None
    gamma: float = 2.0
    f_const: float = 0.0


@dataclass(frozen=True)
class SolverSettings:
    method: str = "cg"
    tol: float = 1e-8
    max_iter: int = 1000
    mode: str = "converge"
    rho: float = 1.0
    omega: float = 1.0
    restart_len: int = 0


@dataclass(frozen=True)
class ScenarioConfig:
    problem: ProblemConfig = field(default_factory=ProblemConfig)
    solver: SolverSettings = field(default_factory=SolverSettings)
    preconditioner: PreconditionerSpec = field(default_factory=PreconditionerSpec)
    initial_guess: str = "zero"
    snapshots: tuple = ()
    probes: object = "default"
    outputs: str = "out"
    seed: int = 0
    label: str = ""
    bounds: bool = False
    spectrum: bool = True
    diameter: bool = True

    def validate(self) -> "ScenarioConfig":
        p, s = self.problem, self.solver
        if p.kind not in PROBLEM_KINDS:
            raise ConfigError(f"unknown kind '{p.kind}', expected one of {PROBLEM_KINDS}", "problem.kind")
        if p.n < 2:
            raise ConfigError("must be >= 2", "problem.n")
        if p.kind == "2d" and (p.m is None or p.m < 2):
            raise ConfigError("2d problems need m >= 2", "problem.m")
        if p.gamma < 0:
            raise ConfigError("must be >= 0", "problem.gamma")
        if p.f_const < 0:
            raise ConfigError("must be >= 0", "problem.f_const")
        if p.f_const != 0 and p.gamma == 0:
            raise ConfigError("constant forcing needs gamma > 0", "problem.f_const")
        if s.method not in SOLVER_METHODS:
            raise ConfigError(f"unknown method '{s.method}', expected one of {SOLVER_METHODS}",
                              "solver.method")
        try:
            self.solver_config()
        except ValueError as exc:
            name = next((k for k in ("tol", "max_iter", "mode", "rho", "omega", "restart_len")
                         if str(exc).startswith(k)), "mode")
            raise ConfigError(str(exc), f"solver.{name}") from None
        if s.method == "gmres" and s.restart_len > s.max_iter:
            raise ConfigError("must not exceed solver.max_iter", "solver.restart_len")
        pc = self.preconditioner
        if pc.kind == "hierarchical":
            if s.method != "cg":
                raise ConfigError("hierarchical preconditioning is only wired into cg",
                                  "preconditioner.kind")
            if p.kind != "1d":
                raise ConfigError("hierarchical preconditioning needs a 1d problem",
                                  "preconditioner.kind")
            n = p.n
            if n & (n - 1) or n < 4:
                raise ConfigError(f"hierarchical preconditioner needs a power-of-two dimension "
                                  f"n = 2**p >= 4, got {n}", "problem.n")
            if not 1 <= pc.levels <= n.bit_length() - 2:
                raise ConfigError(f"must lie in 1..{n.bit_length() - 2}", "preconditioner.levels")
        kind, _ = self.guess()
        if kind == "analytic_family" and p.kind != "1d":
            raise ConfigError("analytic_family needs a 1d problem", "initial_guess")
        if self.probes != "default":
            limit = p.n if p.kind != "2d" else p.m * (p.n - 1)
            for q in self.probes:
                if not 0 <= q < limit:
                    raise ConfigError(f"probe {q} outside 0..{limit - 1}", "probes")
        return self

    def guess(self):
        if self.initial_guess == "zero":
            return "zero", None
        mt = _GUESS_RE.match(self.initial_guess)
        if not mt:
            raise ConfigError(f"expected 'zero' or 'analytic_family(g)', got '{self.initial_guess}'",
                              "initial_guess")
        return "analytic_family", float(mt.group(1))

    def solver_config(self):
        from ..solvers import SolverConfig
        s = self.solver
        return SolverConfig(tol=s.tol, max_iter=s.max_iter, mode=s.mode, rho=s.rho,
                            omega=s.omega, restart_len=s.restart_len)

    def to_text(self) -> str:
        lines = []
        for key, value in flatten(self).items():
            if isinstance(value, tuple):
                value = ",".join(str(v) for v in value)
            elif value is None:
                continue
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"

    def with_param(self, name: str, value) -> "ScenarioConfig":
        return _set(self, name, value)


def flatten(cfg: ScenarioConfig) -> dict:
    out = {}
    for f in dataclasses.fields(cfg):
        v = getattr(cfg, f.name)
        if dataclasses.is_dataclass(v):
            for g in dataclasses.fields(v):
                out[f"{f.name}.{g.name}"] = getattr(v, g.name)
        else:
            out[f.name] = v
    return out


def _coerce(raw, target_type, current, key):
    if isinstance(raw, str):
        raw = raw.strip()
    try:
        if target_type in ("bool", bool):
            if isinstance(raw, bool):
                return raw
            if raw.lower() in ("1", "true", "yes", "on"):
                return True
            if raw.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if target_type in ("int", int):
            return int(raw)
        if target_type in ("float", float):
            return float(raw)
        if target_type in ("Optional[int]",):
            return None if raw in ("", "none", None) else int(raw)
        if target_type in ("tuple",):
            if isinstance(raw, (tuple, list)):
                return tuple(int(v) for v in raw)
            return tuple(int(v) for v in raw.split(",") if v.strip())
        if key == "probes":
            if raw == "default":
                return "default"
            if isinstance(raw, (tuple, list)):
                return tuple(int(v) for v in raw)
            return tuple(int(v) for v in str(raw).split(",") if v.strip())
        return str(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"cannot interpret '{raw}'", key) from None


def _set(cfg, name, value):
    head, _, tail = name.partition(".")
    fields = {f.name: f for f in dataclasses.fields(cfg)}
    if head not in fields:
        raise ConfigError("unknown parameter", name)
    current = getattr(cfg, head)
    if tail:
        if not dataclasses.is_dataclass(current):
            raise ConfigError("unknown parameter", name)
        sub = {f.name: f for f in dataclasses.fields(current)}
        if tail not in sub:
            raise ConfigError("unknown parameter", name)
        new_value = _coerce(value, sub[tail].type, getattr(current, tail), name)
        try:
            new_sub = dataclasses.replace(current, **{tail: new_value})
        except ValueError as exc:
            raise ConfigError(str(exc), name) from None
        return dataclasses.replace(cfg, **{head: new_sub})
    if head == "preconditioner":
        return dataclasses.replace(cfg, preconditioner=parse_preconditioner(value))
    return dataclasses.replace(cfg, **{head: _coerce(value, fields[head].type, current, head)})


def parse_preconditioner(text) -> PreconditionerSpec:
    if isinstance(text, PreconditionerSpec):
        return text
    text = str(text).strip()
    if text in ("identity", "none"):
        return PreconditionerSpec()
    mt = re.match(r"^hierarchical\(\s*(\d+)\s*\)$", text)
    if mt:
        return PreconditionerSpec("hierarchical", int(mt.group(1)))
    raise ConfigError(f"expected 'identity' or 'hierarchical(L)', got '{text}'", "preconditioner")


def parse_config(text: str, source: str = "<config>") -> ScenarioConfig:
    cfg = ScenarioConfig()
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.split("#", 1)[0].strip()
        if not s:
            continue
        if "=" not in s:
            raise ConfigError(f"{source}:{lineno}: expected key = value")
        key, value = (t.strip() for t in s.split("=", 1))
        try:
            cfg = _set(cfg, key, value)
        except ConfigError as exc:
            err = ConfigError(f"{source}:{lineno}: {exc}")
            err.field = exc.field
            raise err from None
    try:
        return cfg.validate()
    except ConfigError as exc:
        err = ConfigError(f"{source}: {exc}")
        err.field = exc.field
        raise err from None


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    return parse_config(path.read_text(), str(path))
