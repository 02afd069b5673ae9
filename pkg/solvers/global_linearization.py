"""Global linearization: ``u_{n+1} = L(u_n)^{-1} f``."""

from typing import Optional

from core.problem import ProblemDefinition
from core.state import StateVector
from linearizer.build import build_L
from linsolve.solve import solve
from solvers.base_solver import BaseSolver, IterationCallback
from solvers.options import IterationOptions
from utilities.models import IterationReport


class GlobalLinearizationSolver(BaseSolver):
    """Solve ``A(u) = f`` through the factorization ``A(u) = L(u) u``."""

    method = "global"

    def step(self, u: StateVector, f: StateVector) -> StateVector:
        L = build_L(self.problem, u, self.options.rule, self.options.use_closed_form)
        return solve(L, f, self.options.solve)


def run_iteration(
    problem: ProblemDefinition,
    f: StateVector,
    u0: Optional[StateVector] = None,
    opts: Optional[IterationOptions] = None,
    on_iteration: Optional[IterationCallback] = None,
) -> IterationReport:
    """Run the global-linearization iteration from ``u0`` (default ``f``)."""
    return GlobalLinearizationSolver(problem, opts, on_iteration).run(f, u0)
