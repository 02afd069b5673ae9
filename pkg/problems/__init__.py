"""Discretized problem families."""

from problems.elliptic import EllipticProblem, EllipticProblemSpec, make_elliptic_problem
from problems.integral import IntegralProblem, IntegralProblemSpec, make_integral_problem
from problems.linear import LinearProblem
from problems.manufactured import manufacture_rhs
from problems.parabolic import ParabolicProblem, ParabolicProblemSpec, make_parabolic_problem
from problems.pointwise import PointwiseCubicProblem

__all__ = [
    "EllipticProblem",
    "EllipticProblemSpec",
    "IntegralProblem",
    "IntegralProblemSpec",
    "LinearProblem",
    "ParabolicProblem",
    "ParabolicProblemSpec",
    "PointwiseCubicProblem",
    "make_elliptic_problem",
    "make_integral_problem",
    "make_parabolic_problem",
    "manufacture_rhs",
]
