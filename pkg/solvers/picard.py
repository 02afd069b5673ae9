"""Picard baseline for problems of the form ``A = I + B``."""

from typing import Optional

from core.errors import UnsupportedOperationError
from core.problem import ProblemDefinition
from core.state import StateVector
from solvers.base_solver import BaseSolver, IterationCallback
from solvers.options import IterationOptions
from utilities.models import IterationReport


class PicardSolver(BaseSolver):
    """``u_{n+1} = f - B(u_n)``."""

    method = "picard"

    def prepare(self, f: StateVector) -> None:
        if not self.problem.has_identity_split:
            raise UnsupportedOperationError(
                f"picard iteration needs A = I + B, which {self.problem.family} problems lack"
            )

    def step(self, u: StateVector, f: StateVector) -> StateVector:
        return f - self.problem.state(self.problem.nonlinear_part(u.values))


def picard_solve(
    problem: ProblemDefinition,
    f: StateVector,
    u0: Optional[StateVector] = None,
    opts: Optional[IterationOptions] = None,
    on_iteration: Optional[IterationCallback] = None,
) -> IterationReport:
    return PicardSolver(problem, opts, on_iteration).run(f, u0)
