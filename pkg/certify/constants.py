"""
Estimates of the certificate constants
======================================
``p``  norm of ``A'(0)^{-1}``
``s``  sup over ``B_R`` and ``t in [0, 1]`` of ``||A'(t u) - A'(0)||``
``q``  Lipschitz constant of ``u -> L(u)^{-1}`` on ``B_R``

Suprema are replaced by maxima over deterministic samples, so ``s`` and ``q``
are sampled lower bounds.
"""

from typing import Optional

import numpy as np
from scipy.linalg import lu_solve, svdvals

from config.settings import settings
from core.errors import InvalidArgumentError, SingularOperatorError
from core.mesh import NormKind
from core.operators import LinearOperatorHandle
from core.problem import ProblemDefinition
from certify.sampling import make_rng, sample_ball, sample_pairs, unit_direction
from linearizer.build import build_L
from linearizer.quadrature import QuadratureRule
from linsolve.norms import estimate_inverse_norm, estimate_operator_norm, sup_norm_of_matrix
from linsolve.options import SolveOptions
from linsolve.solve import factorize, materialize, solve_array
from utilities.logger import get_logger

logger = get_logger("certify")

EXACT = "exact"
PROBED = "power-iteration"


def _uses_exact_norms(problem: ProblemDefinition) -> bool:
    return problem.size <= settings.exact_norm_limit


def operator_norm(handle: LinearOperatorHandle, norm_kind: NormKind, exact: bool) -> float:
    """Exact dense norm when ``exact``, otherwise ``probe_count`` power iterations."""
    if norm_kind is NormKind.SUP:
        return sup_norm_of_matrix(materialize(handle))
    if exact:
        matrix = materialize(handle)
        if not np.any(matrix):
            return 0.0
        return float(svdvals(matrix)[0])
    return estimate_operator_norm(
        handle, iterations=max(10, settings.probe_count), norm_kind=norm_kind
    )


def estimate_p(problem: ProblemDefinition, opts: Optional[SolveOptions] = None) -> float:
    """``||A'(0)^{-1}||`` in the problem norm.

    Raises:
        SingularOperatorError: ``A'(0)`` is singular.
    """
    zero = np.zeros(problem.size)
    return estimate_inverse_norm(problem.derivative_operator(zero), opts, problem.norm_kind)


def estimate_s(
    problem: ProblemDefinition,
    R: float,
    n_samples: int = 20,
    n_t: int = 5,
    seed: Optional[int] = None,
) -> float:
    """Max of ``||A'(t u) - A'(0)||`` over sampled ``u`` in ``B_R`` and ``t`` on a uniform grid."""
    if R < 0.0:
        raise InvalidArgumentError("radius must be non-negative")
    if n_samples < 1 or n_t < 2:
        raise InvalidArgumentError("need at least one sample and two t points")
    if R == 0.0:
        return 0.0
    zero = np.zeros(problem.size)
    base = problem.derivative_operator(zero)
    exact = _uses_exact_norms(problem)
    rng = make_rng(seed)
    best = 0.0
    for u in sample_ball(problem.mesh, problem.norm_kind, R, n_samples, rng):
        for t in np.linspace(0.0, 1.0, n_t)[1:]:
            difference = problem.derivative_operator(t * u) - base
            best = max(best, operator_norm(difference, problem.norm_kind, exact))
    logger.debug("s estimate %.6e over %d samples", best, n_samples)
    return best


def _resolvent_norm(
    Lu: LinearOperatorHandle,
    middle: LinearOperatorHandle,
    Lv: LinearOperatorHandle,
    norm_kind: NormKind,
    exact: bool,
    opts: Optional[SolveOptions],
) -> float:
    """``||Lu^{-1} middle Lv^{-1}||``."""
    if exact:
        factors_u = factorize(materialize(Lu))
        factors_v = factorize(materialize(Lv))
        left = lu_solve(factors_u, materialize(middle), check_finite=False)
        # left @ Lv^{-1} = (Lv^{-T} left^T)^T
        product = lu_solve(factors_v, left.T, trans=1, check_finite=False).T
        return operator_norm(LinearOperatorHandle.from_matrix(product), norm_kind, True)

    def transpose(handle):
        return LinearOperatorHandle(
            dimension=handle.dimension, matvec=handle.apply_transpose, rmatvec=handle.apply
        )

    Lu_t, Lv_t = transpose(Lu), transpose(Lv)
    composite = LinearOperatorHandle(
        dimension=Lu.dimension,
        matvec=lambda w: solve_array(Lu, middle.apply(solve_array(Lv, w, opts)), opts),
        rmatvec=lambda w: solve_array(
            Lv_t, middle.apply_transpose(solve_array(Lu_t, w, opts)), opts
        ),
    )
    return operator_norm(composite, norm_kind, False)


def estimate_lipschitz_q(
    problem: ProblemDefinition,
    R: float,
    n_pairs: int = 10,
    rule: Optional[QuadratureRule] = None,
    opts: Optional[SolveOptions] = None,
    seed: Optional[int] = None,
    use_closed_form: bool = False,
) -> float:
    """Max over sampled pairs of ``||L(u)^{-1} (L(v) - L(u)) L(v)^{-1}|| / ||u - v||``.

    Raises:
        SingularOperatorError: ``L`` is singular at a sample; the message names it.
    """
    if R < 0.0:
        raise InvalidArgumentError("radius must be non-negative")
    if R == 0.0 or n_pairs < 1:
        return 0.0
    exact = _uses_exact_norms(problem)
    rng = make_rng(seed)
    best = 0.0
    for index, (u, v) in enumerate(
        sample_pairs(problem.mesh, problem.norm_kind, R, n_pairs, rng)
    ):
        try:
            Lu = build_L(problem, problem.state(u), rule, use_closed_form)
            Lv = build_L(problem, problem.state(v), rule, use_closed_form)
            value = _resolvent_norm(Lu, Lv - Lu, Lv, problem.norm_kind, exact, opts)
        except SingularOperatorError as exc:
            raise SingularOperatorError(
                f"L is singular at sample pair {index}: {exc}", exc.residual
            ) from exc
        best = max(best, value / problem.norm_of(u - v))
    logger.debug("q estimate %.6e over %d pairs", best, n_pairs)
    return best


def estimate_q_by_derivative(
    problem: ProblemDefinition,
    R: float,
    n_samples: int = 5,
    rule: Optional[QuadratureRule] = None,
    opts: Optional[SolveOptions] = None,
    seed: Optional[int] = None,
) -> float:
    """Cross-check of ``q``: ``||L(u)^{-1} (dL(u)[h]) L(u)^{-1}||`` for unit directions ``h``.

    The directional derivative of ``L`` is a central difference.
    """
    if R <= 0.0 or n_samples < 1:
        return 0.0
    exact = _uses_exact_norms(problem)
    rng = make_rng(seed)
    best = 0.0
    for u in sample_ball(problem.mesh, problem.norm_kind, R, n_samples, rng):
        direction = unit_direction(problem.mesh, problem.norm_kind, rng)
        delta = 1e-4 * (1.0 + problem.norm_of(u))
        Lu = build_L(problem, problem.state(u), rule)
        forward = build_L(problem, problem.state(u + delta * direction), rule)
        backward = build_L(problem, problem.state(u - delta * direction), rule)
        derivative = _scaled_difference(forward, backward, 0.5 / delta)
        best = max(best, _resolvent_norm(Lu, derivative, Lu, problem.norm_kind, exact, opts))
    return best


def _scaled_difference(
    a: LinearOperatorHandle, b: LinearOperatorHandle, scale: float
) -> LinearOperatorHandle:
    if a.dense is not None and b.dense is not None:
        return LinearOperatorHandle.from_matrix(scale * (a.dense - b.dense), symmetric=False)
    diff = a - b
    return LinearOperatorHandle(
        dimension=a.dimension,
        matvec=lambda w: scale * diff.apply(w),
        rmatvec=lambda w: scale * diff.apply_transpose(w),
    )


def norm_method(problem: ProblemDefinition) -> str:
    """How operator norms are computed for this problem size."""
    return EXACT if _uses_exact_norms(problem) else PROBED
