"""Right-hand sides manufactured from a chosen discrete solution."""

from core.problem import ProblemDefinition, evaluate_A
from core.state import StateVector


def manufacture_rhs(problem: ProblemDefinition, u_exact: StateVector) -> StateVector:
    """``f = A(u_exact)``, so ``u_exact`` solves the discrete equation exactly."""
    return evaluate_A(problem, u_exact)
