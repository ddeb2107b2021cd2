"""CSC Dubins paths in 3D, solved over the start and goal h-offsets."""

import json

from ._core import (
    CscError,
    Path,
    ProblemInstance,
    Solution,
    SolutionType,
    SolverOptions,
    enumerate_roots,
    extract_path,
    jacobian,
    residuals,
    solve_all,
    solve_type,
    straight_path,
    verify_path,
)
from ._core import solve_scenario_json as _solve_scenario_json


def solve_scenario(path):
    """Run a scenario JSON file; returns the report as a dict."""
    return json.loads(_solve_scenario_json(str(path)))


def valid_paths(instance, options=None):
    """(solution, path) pairs for every directionally valid root."""
    sols = solve_all(instance) if options is None else solve_all(instance, options)
    return [(s, extract_path(s, instance)) for s in sols if s.valid]


__all__ = [
    "CscError",
    "Path",
    "ProblemInstance",
    "Solution",
    "SolutionType",
    "SolverOptions",
    "enumerate_roots",
    "extract_path",
    "jacobian",
    "residuals",
    "solve_all",
    "solve_scenario",
    "solve_type",
    "straight_path",
    "valid_paths",
    "verify_path",
]
