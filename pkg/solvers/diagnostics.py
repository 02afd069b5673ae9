"""Convergence diagnostics computed from iteration reports."""

import itertools
import math
from typing import List, NamedTuple, Optional

from core.errors import InsufficientDataError, InvalidArgumentError, NonConvergenceError
from core.operators import LinearOperatorHandle
from core.problem import ProblemDefinition
from core.state import StateVector, norm
from linsolve.options import SolveOptions
from linsolve.solve import solve
from solvers.global_linearization import run_iteration
from solvers.options import IterationOptions
from utilities.logger import get_logger
from utilities.models import IterationReport

logger = get_logger("diagnostics")


def empirical_contraction(report: IterationReport) -> float:
    """Largest step ratio over the last half of the run.

    Raises:
        InsufficientDataError: fewer than three step norms.
    """
    if len(report.step_norms) < 3:
        raise InsufficientDataError(
            f"need at least 3 step norms, got {len(report.step_norms)}"
        )
    ratios = report.ratios
    tail = ratios[-math.ceil(len(ratios) / 2):]
    return float(max(tail))


class BallBookkeeping(NamedTuple):
    S_radius: float
    all_inside: bool


def ball_bookkeeping(report: IterationReport, u0: StateVector, Q: float) -> BallBookkeeping:
    """``S = ||u0|| + ||u1 - u0|| / (1 - Q)`` and whether every iterate stays in ``B_S``."""
    if not 0.0 <= Q < 1.0:
        raise InvalidArgumentError(f"contraction constant must lie in [0, 1), got {Q!r}")
    if len(report.iterate_norms) < 2 or not report.step_norms:
        raise InsufficientDataError("ball bookkeeping needs at least one completed step")
    S = norm(u0) + report.step_norms[0] / (1.0 - Q)
    inside = all(value <= S + 1e-12 for value in report.iterate_norms)
    return BallBookkeeping(S, inside)


class FeasibleQ(NamedTuple):
    """Largest Lipschitz constant ``q`` compatible with keeping iterates in ``B_R``."""

    q_max: float
    Q_of_R: float

    @property
    def feasible(self) -> bool:
        return self.q_max > 0.0

    @property
    def strict(self) -> bool:
        return self.Q_of_R < 1.0


def feasible_q_interval(
    u0: StateVector,
    f: StateVector,
    R: float,
    L0: LinearOperatorHandle,
    opts: Optional[SolveOptions] = None,
) -> FeasibleQ:
    """Range ``0 < q <= q_max`` with ``q_max = (1 - ||w1 - u0|| / (R - ||u0||)) / ||f||``.

    ``w1 = L0^{-1} f`` is the first iterate.

    Raises:
        InvalidArgumentError: ``R <= ||u0||`` or ``f = 0``.
    """
    u0_norm = norm(u0)
    f_norm = norm(f)
    if R <= u0_norm:
        raise InvalidArgumentError(f"radius {R} must exceed ||u0|| = {u0_norm}")
    if f_norm == 0.0:
        raise InvalidArgumentError("f must be nonzero")
    w1 = solve(L0, f, opts)
    ratio = norm(w1 - u0) / (R - u0_norm)
    Q_of_R = 1.0 - ratio
    q_max = Q_of_R / f_norm if ratio < 1.0 else 0.0
    return FeasibleQ(q_max, Q_of_R)


def uniqueness_probe(
    problem: ProblemDefinition,
    f: StateVector,
    starts: List[StateVector],
    opts: Optional[IterationOptions] = None,
) -> float:
    """Maximum pairwise distance between the limits reached from several starts.

    Raises:
        InvalidArgumentError: fewer than two starts.
        NonConvergenceError: some run did not converge; the report is attached.
    """
    if len(starts) < 2:
        raise InvalidArgumentError("uniqueness probe needs at least two starting points")
    finals = []
    for index, u0 in enumerate(starts):
        report = run_iteration(problem, f, u0, opts)
        if not report.converged:
            raise NonConvergenceError(
                f"start {index} ended with {report.termination.value}", report
            )
        finals.append(report.final_state)
    spread = max(norm(a - b) for a, b in itertools.combinations(finals, 2))
    logger.info("uniqueness probe over %d starts: spread %.3e", len(starts), spread)
    return float(spread)
