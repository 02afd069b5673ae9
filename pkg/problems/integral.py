"""
Hammerstein integral operators
==============================
``A(u)(x) = u(x) + int k(x, y) g(u(y)) dy`` discretized by the Nyström
method with trapezoid weights on a closed interval, measured in the sup norm.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from core.errors import InvalidSpecError
from core.mesh import Mesh, NormKind
from core.operators import LinearOperatorHandle
from core.problem import ProblemDefinition
from linearizer.ratios import CoefficientId, RatioCoefficient, ratio_array
from utilities.validators import require_finite, require_vanishing

Kernel = Callable[[np.ndarray, np.ndarray], np.ndarray]
ScalarFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class IntegralProblemSpec:
    kernel: Kernel
    g: ScalarFn
    g_prime: ScalarFn
    x_lo: float = 0.0
    x_hi: float = 1.0
    n_nodes: int = 33
    symmetric: bool = False


def trapezoid_weights(mesh: Mesh) -> np.ndarray:
    h = mesh.spacings[0]
    weights = np.full(mesh.size, h)
    weights[0] = weights[-1] = 0.5 * h
    return weights


class IntegralProblem(ProblemDefinition):
    family = "integral"

    def __init__(self, spec: IntegralProblemSpec, mesh: Mesh, weighted_kernel: np.ndarray):
        super().__init__(
            mesh,
            NormKind.SUP,
            {"x_lo": spec.x_lo, "x_hi": spec.x_hi, "n_nodes": spec.n_nodes},
        )
        self.spec = spec
        self.weighted_kernel = weighted_kernel
        self.ratio = RatioCoefficient.reaction(spec.g, spec.g_prime)
        self._identity = np.eye(mesh.size)

    def _g(self, u):
        return np.broadcast_to(np.asarray(self.spec.g(u), dtype=float), u.shape)

    def _g_prime(self, u):
        return np.broadcast_to(np.asarray(self.spec.g_prime(u), dtype=float), u.shape)

    def evaluate(self, values):
        return values + self.weighted_kernel @ self._g(values)

    def derivative_action(self, u, w):
        return w + self.weighted_kernel @ (self._g_prime(u) * w)

    def derivative_matrix(self, u):
        if not self.dense_allowed():
            return None
        return self._identity + self.weighted_kernel * self._g_prime(u)[None, :]

    def closed_form_L(self, u):
        coefficient = ratio_array(self.ratio, CoefficientId.G_OVER_U, u)
        return LinearOperatorHandle.from_matrix(
            self._identity + self.weighted_kernel * coefficient[None, :], symmetric=False
        )

    @property
    def has_identity_split(self) -> bool:
        return True

    def nonlinear_part(self, values):
        return self.weighted_kernel @ self._g(values)


def make_integral_problem(spec: IntegralProblemSpec) -> IntegralProblem:
    """Build the Nyström discretization ``u_i + sum_j w_j k(x_i, x_j) g(u_j)``.

    Raises:
        InvalidSpecError: ``g(0) != 0`` or a declared-symmetric kernel is not symmetric.
    """
    mesh = Mesh.closed_interval(spec.x_lo, spec.x_hi, spec.n_nodes)
    require_vanishing(spec.g(np.zeros(1)), "g(0)")

    x = mesh.axes[0]
    X, Y = np.meshgrid(x, x, indexing="ij")
    kernel = np.broadcast_to(require_finite(spec.kernel(X, Y), "kernel k(x, y)"), X.shape)
    if spec.symmetric and np.max(np.abs(kernel - kernel.T)) > 1e-12:
        raise InvalidSpecError("kernel declared symmetric but k(x, y) != k(y, x)")

    weighted = kernel * trapezoid_weights(mesh)[None, :]
    weighted.setflags(write=False)
    return IntegralProblem(spec, mesh, weighted)
