"""Descent subgradient method for nonsmooth, possibly nonconvex objectives."""

from .core import (ConvergenceError, CountingOracle, FunctionOracle, IterCapReached, LineSearchStalled,
                   ObjectiveOracle, ParameterError, RunReport, SolverParams, Status, SuboptError,
                   validate_params)
from .inner import CSVTrace, StepRecord, dg_sp, reset_bundle
from .linesearch import Descent, NullStep, two_point_line_search
from .minnorm import BACKEND, Bundle, MinNormSolution, available_backends, distance_to_hull, min_norm_point
from .outer import rounds_needed, schedule, solve
from .problems import PROBLEM_NAMES, make_problem, random_start, reference_value, relative_error

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Bundle", "CSVTrace", "ConvergenceError", "CountingOracle", "Descent", "FunctionOracle",
    "IterCapReached", "LineSearchStalled", "MinNormSolution", "NullStep", "ObjectiveOracle",
    "PROBLEM_NAMES", "ParameterError", "RunReport", "SolverParams", "Status", "StepRecord",
    "SuboptError", "available_backends", "dg_sp", "distance_to_hull", "make_problem",
    "min_norm_point", "random_start", "reference_value", "relative_error", "reset_bundle",
    "rounds_needed", "schedule", "solve", "two_point_line_search", "validate_params",
]
