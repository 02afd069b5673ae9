"""Undamped Newton baseline."""

from typing import Optional

from core.problem import ProblemDefinition, evaluate_A
from core.state import StateVector
from linsolve.solve import solve
from solvers.base_solver import BaseSolver, IterationCallback
from solvers.options import IterationOptions
from utilities.models import IterationReport


class NewtonSolver(BaseSolver):
    """``u_{n+1} = u_n - A'(u_n)^{-1} (A(u_n) - f)``."""

    method = "newton"

    def step(self, u: StateVector, f: StateVector) -> StateVector:
        jacobian = self.problem.derivative_operator(u.values)
        correction = solve(jacobian, evaluate_A(self.problem, u) - f, self.options.solve)
        return u - correction


def newton_solve(
    problem: ProblemDefinition,
    f: StateVector,
    u0: Optional[StateVector] = None,
    opts: Optional[IterationOptions] = None,
    on_iteration: Optional[IterationCallback] = None,
) -> IterationReport:
    return NewtonSolver(problem, opts, on_iteration).run(f, u0)
