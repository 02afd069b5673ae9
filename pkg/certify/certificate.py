"""Assembly of empirical certificates."""

import math
from typing import Optional

from core.errors import InvalidArgumentError, UnsupportedOperationError
from core.operators import LinearOperatorHandle
from core.problem import ProblemDefinition
from core.state import StateVector, norm
from certify.constants import (
    estimate_lipschitz_q,
    estimate_p,
    estimate_q_by_derivative,
    estimate_s,
    norm_method,
)
from linearizer.build import build_L
from linearizer.quadrature import QuadratureRule
from linsolve.options import SolveOptions
from linsolve.solve import solve
from utilities.logger import get_logger
from utilities.models import Certificate, InvertibilityVerdict
from utilities.validators import require_positive

logger = get_logger("certificate")

SAMPLED = "sampled lower bound"


def certify_invertibility(p: float, s: float) -> InvertibilityVerdict:
    """Neumann-series verdict: holds iff ``p s < 1``, with bound ``p / (1 - p s)``."""
    if p < 0.0 or s < 0.0:
        raise InvalidArgumentError("p and s must be non-negative")
    ps = p * s
    if ps < 1.0:
        return InvertibilityVerdict(p, s, ps, True, p / (1.0 - ps))
    return InvertibilityVerdict(p, s, ps, False, math.inf)


def check_contraction_hypotheses(
    q: float,
    f: StateVector,
    u0: StateVector,
    L0: LinearOperatorHandle,
    R: float,
    opts: Optional[SolveOptions] = None,
    invertibility: Optional[InvertibilityVerdict] = None,
) -> Certificate:
    """Check ``Q = q ||f|| < 1`` and ``||u0|| + ||w1 - u0|| / (1 - Q) <= R``.

    ``L0 = L(u0)`` and ``w1 = L0^{-1} f`` is the first iterate.
    """
    if q < 0.0:
        raise InvalidArgumentError("q must be non-negative")
    R = require_positive(R, "radius")
    f_norm = norm(f)
    Q = q * f_norm
    w1 = solve(L0, f, opts)
    first_step = norm(w1 - u0)
    S = norm(u0) + first_step / (1.0 - Q) if Q < 1.0 else math.inf
    certificate = Certificate(
        R=R,
        q=q,
        Q=Q,
        f_norm=f_norm,
        S_radius=S,
        contraction_holds=bool(Q < 1.0 and S <= R),
        norm_kind=f.norm_kind.value,
    )
    if invertibility is not None:
        certificate.attach_invertibility(invertibility)
    return certificate


def certify_problem(
    problem: ProblemDefinition,
    f: StateVector,
    u0: StateVector,
    R: float,
    samples: int = 20,
    t_points: int = 5,
    pairs: int = 10,
    rule: Optional[QuadratureRule] = None,
    opts: Optional[SolveOptions] = None,
    seed: Optional[int] = None,
) -> Certificate:
    """Estimate ``p``, ``s`` and ``q`` on ``B_R`` and assemble both verdicts."""
    p = estimate_p(problem, opts)
    s = estimate_s(problem, R, samples, t_points, seed)
    verdict = certify_invertibility(p, s)
    q = estimate_lipschitz_q(problem, R, pairs, rule, opts, seed)
    try:
        q_derivative = estimate_q_by_derivative(problem, R, rule=rule, opts=opts, seed=seed)
    except UnsupportedOperationError as exc:
        logger.warning("derivative cross-check of q skipped: %s", exc)
        q_derivative = None

    L0 = build_L(problem, u0, rule)
    certificate = check_contraction_hypotheses(q, f, u0, L0, R, opts, verdict)
    certificate.q_derivative = q_derivative
    certificate.sample_count = samples * (t_points - 1) + pairs
    method = norm_method(problem)
    p_method = "exact" if problem.dense_allowed() else "inverse power iteration"
    certificate.tags = {
        "p": p_method,
        "s": f"{SAMPLED} ({method})",
        "q": f"{SAMPLED} ({method})",
    }
    # The contraction theory for the parabolic family is posed in a stronger norm.
    certificate.mixed_norms = problem.family == "parabolic"
    logger.info(
        "certificate: ps=%.4g (%s), Q=%.4g (%s)",
        verdict.ps,
        "holds" if verdict.holds else "fails",
        certificate.Q,
        "holds" if certificate.contraction_holds else "fails",
    )
    return certificate
