"""Solver settings, convergence bookkeeping and the shared stopping rule."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import ValidationError

StopReason = Literal["tol_reached", "stalled", "max_iter"]


@dataclass(frozen=True)
class SolveConfig:
    """Iteration controls.

    ``init`` is ``"svd"`` (leading singular vectors of the unfoldings),
    ``"random"`` (i.i.d. standard normal from ``seed``) or ``None`` to use
    the solver's own default: ``"svd"`` for CP-ALS, ``"random"`` for the
    structure-preserving solvers.
    """

    tol: float = 1e-8
    max_iter: int = 1000
    seed: int = 0
    init: Literal["svd", "random"] | None = None

    def __post_init__(self):
        if not self.tol > 0:
            raise ValidationError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValidationError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.seed < 0:
            raise ValidationError(f"seed must be non-negative, got {self.seed}")
        if self.init not in (None, "svd", "random"):
            raise ValidationError(f"unknown init {self.init!r}")

    def init_or(self, default: str) -> str:
        return self.init if self.init is not None else default

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


@dataclass
class ConvergenceReport:
    """Per-sweep relative errors and why the iteration stopped.

    ``micro_objective`` holds the solver's objective after each
    micro-iteration (one entry per updated block), preceded by the value at
    the initial guess.  ``reinitializations`` counts blocks that were
    re-drawn because their coefficient matrix degenerated.
    """

    iterations: int = 0
    objective_trace: list[float] = field(default_factory=list)
    stop_reason: StopReason = "max_iter"
    micro_objective: list[float] = field(default_factory=list)
    reinitializations: int = 0

    @property
    def final_error(self) -> float:
        return self.objective_trace[-1] if self.objective_trace else float("nan")

    def record(self, rel_error: float, tol: float) -> bool:
        """Append one sweep's relative error; return True when iteration should stop.

        Stops when the error, or its change from the previous sweep, drops
        below ``tol``.
        """
        prev = self.objective_trace[-1] if self.objective_trace else None
        self.objective_trace.append(float(rel_error))
        self.iterations += 1
        if rel_error < tol:
            self.stop_reason = "tol_reached"
            return True
        if prev is not None and abs(rel_error - prev) < tol:
            self.stop_reason = "stalled"
            return True
        self.stop_reason = "max_iter"
        return False
