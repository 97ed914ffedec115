"""Shared types: solver parameters, run reports, the oracle contract and errors."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Protocol, runtime_checkable

import numpy as np
from numpy.typing import NDArray

Vector = NDArray[np.float64]


class SuboptError(Exception):
    """Base class for solver errors."""


class ParameterError(SuboptError, ValueError):
    """A solver parameter is outside its admissible domain."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


class ConvergenceError(SuboptError, ArithmeticError):
    """The min-norm subproblem did not reach its optimality tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (best residual {residual:.3e})")
        self.residual = residual


class LineSearchStalled(SuboptError):
    """The two-point line search hit its iteration cap.

    Under weak upper semismoothness the search terminates finitely, so this
    usually means the oracle violates that assumption or arithmetic broke down.
    """

    def __init__(self, iterations: int, bracket: tuple[float, float]):
        super().__init__(
            f"line search stalled after {iterations} iterations, "
            f"bracket [{bracket[0]:.3e}, {bracket[1]:.3e}]"
        )
        self.iterations = iterations
        self.bracket = bracket


class IterCapReached(SuboptError):
    """The inner iteration budget ran out; carries the best iterate."""

    def __init__(self, x: Vector, fx: float, iterations: int):
        super().__init__(f"iteration cap reached after {iterations} inner iterations")
        self.x = x
        self.fx = fx
        self.iterations = iterations


class Status(str, enum.Enum):
    CONVERGED = "Converged"
    ITER_CAP = "IterCapReached"
    LS_STALLED = "LineSearchStalled"


@runtime_checkable
class ObjectiveOracle(Protocol):
    """A locally Lipschitz objective with one Clarke subgradient per point.

    ``subgradient`` may return any element of the Clarke subdifferential at
    nonsmooth points; it is not required to be repeatable there.
    """

    dimension: int

    def value(self, x: Vector) -> float: ...

    def subgradient(self, x: Vector) -> Vector: ...


class FunctionOracle:
    """Adapt a pair of plain callables to :class:`ObjectiveOracle`."""

    def __init__(self, value: Callable[[Vector], float], subgradient: Callable[[Vector], Vector], dimension: int):
        self._value = value
        self._subgradient = subgradient
        self.dimension = int(dimension)

    def value(self, x: Vector) -> float:
        return float(self._value(x))

    def subgradient(self, x: Vector) -> Vector:
        return np.asarray(self._subgradient(x), dtype=float)


class CountingOracle:
    """Wrap an oracle and count every value and subgradient call.

    A fresh wrapper is created per run, so counts never leak between runs.
    """

    def __init__(self, oracle: ObjectiveOracle):
        self.oracle = oracle
        self.dimension = oracle.dimension
        self.fun_evals = 0
        self.sub_evals = 0

    def value(self, x: Vector) -> float:
        self.fun_evals += 1
        return float(self.oracle.value(x))

    def subgradient(self, x: Vector) -> Vector:
        self.sub_evals += 1
        return np.asarray(self.oracle.subgradient(x), dtype=float)


@dataclass(frozen=True)
class SolverParams:
    """Tunables of the descent subgradient method.

    The step bounds are derived from ``eps``: the lower step bound is
    ``tbar_fraction * eps`` and the first trial step is the midpoint between
    that bound and ``eps``.
    """

    beta1: float = 1e-6
    beta2: float = 0.1
    zeta: float = 0.25
    p: int = 25
    eps0: float = 0.1
    delta0: float = 1.0
    reduce_eps: float = 0.5
    reduce_delta: float = 0.5
    eta: float = 1e-8
    tbar_fraction: float = 0.5
    max_inner_iters: int = 10_000
    max_linesearch_iters: int = 200
    reset_enabled: bool = False
    reset_M: int = 20
    reset_theta: float = 0.9
    tol_opt: float = 1e-12

    def tbar(self, eps: float) -> float:
        return self.tbar_fraction * eps

    def t0(self, eps: float) -> float:
        return 0.5 * (self.tbar(eps) + eps)


def _open_unit(name: str, value: float) -> None:
    if not (0.0 < value < 1.0):
        raise ParameterError(name, f"{name} must lie in (0,1), got {value!r}")


def validate_params(params: SolverParams) -> SolverParams:
    """Check every parameter domain; return ``params`` unchanged if valid."""
    for name in ("beta1", "beta2", "zeta", "eps0", "delta0", "reduce_eps", "reduce_delta",
                 "eta", "tbar_fraction", "reset_theta", "tol_opt"):
        if not math.isfinite(getattr(params, name)):
            raise ParameterError(name, f"{name} must be finite")
    _open_unit("beta1", params.beta1)
    _open_unit("beta2", params.beta2)
    if not params.beta1 < params.beta2:
        raise ParameterError("beta1", "beta1 < beta2 violated")
    if not (0.0 < params.zeta < 0.5):
        raise ParameterError("zeta", "zeta must lie in (0,0.5)")
    if int(params.p) != params.p or params.p < 1:
        raise ParameterError("p", "p must be a positive integer")
    _open_unit("eps0", params.eps0)
    if not params.delta0 > 0:
        raise ParameterError("delta0", "delta0 must be positive")
    _open_unit("reduce_eps", params.reduce_eps)
    _open_unit("reduce_delta", params.reduce_delta)
    if params.eta < 0:
        raise ParameterError("eta", "eta must be nonnegative")
    _open_unit("tbar_fraction", params.tbar_fraction)
    for name in ("max_inner_iters", "max_linesearch_iters"):
        value = getattr(params, name)
        if int(value) != value or value < 1:
            raise ParameterError(name, f"{name} must be a positive integer")
    if int(params.reset_M) != params.reset_M or params.reset_M <= 2:
        raise ParameterError("reset_M", "reset_M must be an integer > 2")
    if not (0.0 < params.reset_theta <= 1.0):
        raise ParameterError("reset_theta", "reset_theta must lie in (0,1]")
    if not params.tol_opt > 0:
        raise ParameterError("tol_opt", "tol_opt must be positive")
    return params


@dataclass
class RunReport:
    fun_evals: int = 0
    sub_evals: int = 0
    inner_iters: int = 0
    outer_iters: int = 0
    f_end: float = math.nan
    x_end: Vector | None = None
    status: Status = Status.CONVERGED
    wall_time: float = 0.0
    target_reached: bool = False
    message: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def evals(self) -> int:
        return self.fun_evals + self.sub_evals

    def absorb_counts(self, oracle: CountingOracle) -> None:
        self.fun_evals = oracle.fun_evals
        self.sub_evals = oracle.sub_evals
