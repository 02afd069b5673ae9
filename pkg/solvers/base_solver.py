"""
Base Solver Class
=================
Shared iteration loop, stopping rules and bookkeeping. Each method only
overrides ``step``.
"""

import time
from typing import Callable, Optional

import numpy as np

from core.errors import InvalidStateError, SingularOperatorError
from core.problem import ProblemDefinition, evaluate_A
from core.state import StateVector, norm
from solvers.options import IterationOptions
from utilities.logger import get_logger
from utilities.models import IterationReport, TerminationReason

logger = get_logger("solvers")

DIVERGENCE_WINDOW = 5
DIVERGENCE_GROWTH = 10.0
BALL_SLACK = 1e-12

IterationCallback = Callable[[int, IterationReport], None]


def is_diverging(step_norms) -> bool:
    """Step norm grew by ``DIVERGENCE_GROWTH`` over ``DIVERGENCE_WINDOW`` iterations."""
    if len(step_norms) <= DIVERGENCE_WINDOW:
        return False
    earlier = step_norms[-1 - DIVERGENCE_WINDOW]
    return earlier > 0.0 and step_norms[-1] >= DIVERGENCE_GROWTH * earlier


class BaseSolver:
    """Base class for iterative solvers of ``A(u) = f``."""

    method: str = "base"

    def __init__(
        self,
        problem: ProblemDefinition,
        options: Optional[IterationOptions] = None,
        on_iteration: Optional[IterationCallback] = None,
    ):
        self.problem = problem
        self.options = options or IterationOptions()
        self.on_iteration = on_iteration

    def prepare(self, f: StateVector) -> None:
        """Hook run once before iterating; raise to refuse the problem."""

    def step(self, u: StateVector, f: StateVector) -> StateVector:
        """Return the next iterate."""
        raise NotImplementedError("Each solver must implement its own step method.")

    def _record(self, report: IterationReport, u: StateVector, f: StateVector) -> float:
        residual = norm(evaluate_A(self.problem, u) - f)
        iterate_norm = norm(u)
        report.residual_norms.append(residual)
        report.iterate_norms.append(iterate_norm)
        radius = self.options.radius
        report.inside_ball.append(radius is None or iterate_norm <= radius + BALL_SLACK)
        return residual

    def run(self, f: StateVector, u0: Optional[StateVector] = None) -> IterationReport:
        """Iterate from ``u0`` (default ``f``) until a stopping rule fires."""
        problem, opts = self.problem, self.options
        problem.check_state(f)
        u = f if u0 is None else u0
        problem.check_state(u)
        self.prepare(f)

        start = time.perf_counter()
        report = IterationReport(method=self.method)
        residual_tol = opts.residual_tolerance * (1.0 + norm(f))
        report.final_state = u

        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            try:
                residual = self._record(report, u, f)
            except InvalidStateError as exc:
                report.termination = TerminationReason.DIVERGED
                report.message = str(exc)
                residual = np.inf

            if report.residual_norms and residual <= residual_tol:
                report.termination = TerminationReason.CONVERGED_RESIDUAL
            elif report.residual_norms:
                report.termination = self._iterate(report, u, f, residual_tol)

        report.wall_time_ms = 1000.0 * (time.perf_counter() - start)
        level = logger.info if report.converged else logger.warning
        level(
            "%s stopped after %d iterations: %s (residual %.3e)",
            self.method,
            report.iterations,
            report.termination.value,
            report.final_residual,
        )
        return report

    def _iterate(
        self, report: IterationReport, u: StateVector, f: StateVector, residual_tol: float
    ) -> TerminationReason:
        opts = self.options
        for n in range(opts.max_iterations):
            try:
                u_next = self.step(u, f)
                step_norm = norm(u_next - u)
                residual = self._record(report, u_next, f)
                report.step_norms.append(step_norm)
            except SingularOperatorError as exc:
                report.message = str(exc)
                return TerminationReason.SINGULAR_L
            except InvalidStateError as exc:
                report.message = str(exc)
                return TerminationReason.DIVERGED

            u_prev, u = u, u_next
            report.final_state = u
            logger.debug(
                "%s n=%d step=%.3e residual=%.3e", self.method, n + 1, step_norm, residual
            )
            if self.on_iteration is not None:
                self.on_iteration(n + 1, report)

            # A small step alone never stops the run.
            if residual <= residual_tol:
                if step_norm <= opts.step_tolerance * (1.0 + norm(u_prev)):
                    return TerminationReason.CONVERGED_STEP
                return TerminationReason.CONVERGED_RESIDUAL
            if is_diverging(report.step_norms):
                report.message = "step norms grew tenfold over five iterations"
                return TerminationReason.DIVERGED
        return TerminationReason.MAX_ITER
