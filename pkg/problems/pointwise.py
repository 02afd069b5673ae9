"""Node-wise cubic ``A(u) = u^3``, a fixture on which the global iteration fails."""

from typing import Optional

import numpy as np

from core.mesh import Mesh, NormKind
from core.operators import LinearOperatorHandle
from core.problem import ProblemDefinition


class PointwiseCubicProblem(ProblemDefinition):
    """``A(u)_i = u_i^3`` with ``L(u) = diag(u^2)`` and ``A'(u) = diag(3 u^2)``.

    ``A'(0) = 0``, so no ball around the origin satisfies the invertibility
    hypothesis. From ``u0 = 1`` with ``f = 8`` the global iteration
    oscillates with growing amplitude while Newton converges to 2.
    """

    family = "pointwise-cubic"

    def __init__(self, mesh: Optional[Mesh] = None):
        super().__init__(mesh or Mesh.closed_interval(0.0, 1.0, 3), NormKind.SUP)

    def evaluate(self, values):
        return values**3

    def derivative_action(self, u, w):
        return 3.0 * u**2 * w

    def derivative_matrix(self, u):
        return np.diag(3.0 * u**2)

    def operator_flags(self, u):
        return True, bool(np.all(u != 0.0))

    def closed_form_L(self, u):
        return LinearOperatorHandle.from_matrix(np.diag(u**2), symmetric=True)
