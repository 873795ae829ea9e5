"""Scenario configs, runner, figure targets and the command line."""

from .config import (PROBLEM_KINDS, SOLVER_METHODS, ProblemConfig, ScenarioConfig,
                     SolverSettings, load_config, parse_config)
from .figures import FIGURES, TABLE_VERSION, figure_targets, reproduce
from .runner import OutputBundle, read_summary, run_scenario, sweep

__all__ = [
    "PROBLEM_KINDS", "SOLVER_METHODS", "ProblemConfig", "ScenarioConfig", "SolverSettings",
    "load_config", "parse_config", "FIGURES", "TABLE_VERSION", "figure_targets", "reproduce",
    "OutputBundle", "read_summary", "run_scenario", "sweep",
]
