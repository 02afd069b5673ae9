"""Construction of the global linearization ``L(u) = int_0^1 A'(t u) dt``."""

from typing import Optional

import numpy as np

from config.settings import settings
from core.operators import LinearOperatorHandle
from core.problem import ProblemDefinition, evaluate_A
from core.state import StateVector, norm
from linearizer.quadrature import QuadratureRule, gauss_legendre
from utilities.logger import get_logger

logger = get_logger("linearizer")


def default_rule() -> QuadratureRule:
    return gauss_legendre(settings.quadrature_order)


def build_L_quadrature(
    problem: ProblemDefinition, u: StateVector, rule: Optional[QuadratureRule] = None
) -> LinearOperatorHandle:
    """``sum_k w_k A'(t_k u)``, summed densely when every derivative matrix is available."""
    problem.check_state(u)
    rule = rule or default_rule()
    base = np.array(u.values)
    symmetric, definite = problem.operator_flags(base)

    if problem.dense_allowed():
        total = None
        for t_k, w_k in zip(rule.nodes, rule.weights):
            matrix = problem.derivative_matrix(t_k * base)
            if matrix is None:
                total = None
                break
            total = w_k * matrix if total is None else total + w_k * matrix
        if total is not None:
            return LinearOperatorHandle.from_matrix(total, symmetric=symmetric, definite=definite)

    logger.debug("building matrix-free L(u) with %d nodes", rule.order)
    states = [t_k * base for t_k in rule.nodes]
    weights = list(rule.weights)

    def matvec(w):
        acc = np.zeros(problem.size)
        for state, weight in zip(states, weights):
            acc += weight * problem.derivative_action(state, w)
        return acc

    return LinearOperatorHandle(
        dimension=problem.size, matvec=matvec, symmetric=symmetric, definite=definite
    )


def build_L_closed_form(problem: ProblemDefinition, u: StateVector) -> LinearOperatorHandle:
    """Family-specific closed form of ``L(u)``; raises ``UnsupportedOperationError`` if absent."""
    problem.check_state(u)
    return problem.closed_form_L(np.array(u.values))


def build_L(
    problem: ProblemDefinition,
    u: StateVector,
    rule: Optional[QuadratureRule] = None,
    use_closed_form: bool = False,
) -> LinearOperatorHandle:
    if use_closed_form:
        return build_L_closed_form(problem, u)
    return build_L_quadrature(problem, u, rule)


def verify_factorization(
    problem: ProblemDefinition,
    u: StateVector,
    rule: Optional[QuadratureRule] = None,
    use_closed_form: bool = False,
) -> float:
    """Relative defect ``||A(u) - L(u) u|| / (1 + ||A(u)||)``."""
    a_u = evaluate_A(problem, u)
    lin = build_L(problem, u, rule, use_closed_form)
    defect = a_u.values - lin.apply(u.values)
    return norm(problem.state(defect)) / (1.0 + norm(a_u))
