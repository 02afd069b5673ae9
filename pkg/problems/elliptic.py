"""
Semilinear Dirichlet problems
=============================
``A(u) = -Delta_h u + g(x, u)`` on the interior nodes of ``[lo, hi]^d``
(d = 1 or 2) with homogeneous Dirichlet data eliminated, measured in the
discrete L2 norm.
"""

from dataclasses import dataclass
from functools import partial
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp

from core.errors import InvalidSpecError
from core.mesh import Mesh, NormKind
from core.operators import LinearOperatorHandle
from core.problem import ProblemDefinition
from linearizer.ratios import CoefficientId, RatioCoefficient, ratio_array
from utilities.validators import require_vanishing

# g(coords, u) with coords of shape (N, d)
Reaction = Callable[[np.ndarray, np.ndarray], np.ndarray]

SPLIT_SAMPLE_AMPLITUDES = np.linspace(-4.0, 4.0, 17)


@dataclass(frozen=True)
class EllipticProblemSpec:
    g: Reaction
    g_u: Reaction
    split_a: Optional[float] = None
    dimension: int = 1
    n: int = 64
    lo: float = 0.0
    hi: float = 1.0


def negative_laplacian(mesh: Mesh) -> sp.csr_matrix:
    """Three-point (1D) or five-point (2D) ``-Delta_h`` as a Kronecker sum."""
    blocks = []
    for axis, h in zip(mesh.axes, mesh.spacings):
        n = axis.size
        blocks.append(sp.diags([-1.0, 2.0, -1.0], [-1, 0, 1], shape=(n, n)) / h**2)
    if len(blocks) == 1:
        return blocks[0].tocsr()
    first, second = blocks
    return (
        sp.kron(first, sp.identity(second.shape[0]))
        + sp.kron(sp.identity(first.shape[0]), second)
    ).tocsr()


class EllipticProblem(ProblemDefinition):
    family = "elliptic"

    def __init__(self, spec: EllipticProblemSpec, mesh: Mesh):
        super().__init__(
            mesh,
            NormKind.DISCRETE_L2,
            {"dimension": spec.dimension, "n": spec.n, "split_a": spec.split_a},
        )
        self.spec = spec
        self.coords = mesh.coordinates()
        self.stiffness = negative_laplacian(mesh)
        self._dense_stiffness = self.stiffness.toarray() if self.dense_allowed() else None
        self.ratio = RatioCoefficient.reaction(
            partial(self._g_at_nodes, spec.g), partial(self._g_at_nodes, spec.g_u)
        )

    def _g_at_nodes(self, fn: Reaction, u):
        return np.broadcast_to(np.asarray(fn(self.coords, u), dtype=float), u.shape)

    def reaction(self, u):
        return self._g_at_nodes(self.spec.g, u)

    def reaction_derivative(self, u):
        return self._g_at_nodes(self.spec.g_u, u)

    def evaluate(self, values):
        return self.stiffness @ values + self.reaction(values)

    def derivative_action(self, u, w):
        return self.stiffness @ w + self.reaction_derivative(u) * w

    def derivative_matrix(self, u):
        if self._dense_stiffness is None:
            return None
        return self._dense_stiffness + np.diag(self.reaction_derivative(u))

    def operator_flags(self, u):
        zero = np.zeros_like(u)
        definite = bool(
            np.min(self.reaction_derivative(zero)) >= 0.0
            and np.min(self.reaction_derivative(u)) >= 0.0
        )
        return True, definite

    def closed_form_L(self, u):
        coefficient = ratio_array(self.ratio, CoefficientId.G_OVER_U, u)
        definite = bool(np.min(coefficient) >= 0.0)
        if self._dense_stiffness is not None:
            return LinearOperatorHandle.from_matrix(
                self._dense_stiffness + np.diag(coefficient), symmetric=True, definite=definite
            )
        return LinearOperatorHandle.from_matrix(
            self.stiffness + sp.diags(coefficient), symmetric=True, definite=definite
        )

    def inverse_bound(self) -> Optional[float]:
        """``1/a`` when ``g(x, u)/u >= a > 0`` is declared."""
        if self.spec.split_a is None:
            return None
        return 1.0 / self.spec.split_a


def make_elliptic_problem(spec: EllipticProblemSpec) -> EllipticProblem:
    """Assemble the finite-difference operator and check the declared hypotheses.

    Raises:
        InvalidSpecError: bad dimension, ``g(x, 0) != 0`` on a node, or a declared
            split ``g/u >= a > 0`` violated on the sampled states.
    """
    if spec.dimension == 1:
        mesh = Mesh.interior_interval(spec.lo, spec.hi, spec.n)
    elif spec.dimension == 2:
        mesh = Mesh.interior_rectangle(spec.lo, spec.hi, spec.n)
    else:
        raise InvalidSpecError(f"dimension must be 1 or 2, got {spec.dimension}")

    problem = EllipticProblem(spec, mesh)
    require_vanishing(problem.reaction(np.zeros(mesh.size)), "g(x, 0)")

    if spec.split_a is not None:
        if spec.split_a <= 0.0:
            raise InvalidSpecError("split constant a must be positive")
        ones = np.ones(mesh.size)
        for amplitude in SPLIT_SAMPLE_AMPLITUDES:
            ratio = ratio_array(problem.ratio, CoefficientId.G_OVER_U, amplitude * ones)
            if np.min(ratio - spec.split_a) < -1e-12:
                raise InvalidSpecError(
                    f"g(x, u)/u falls below a = {spec.split_a} at u = {amplitude}"
                )
    return problem
