"""
Quasilinear heat equation in Volterra form
==========================================
``u_t - d/dx [a(u) u_x] = f`` with zero Dirichlet data is integrated in time:

    A(u)(x, t) = u(x, t) - int_0^t d/dx [a(u) u_x] dtau
               = u0(x) + int_0^t f dtau

The flux is written conservatively with the secant face diffusivity, which
makes the spatial part ``Delta_h gamma(u)`` with ``gamma' = a``. The time
integral uses cumulative trapezoid weights. Unknowns are stored as an
``(n_x, n_t)`` array in C order.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from core.errors import InvalidSpecError
from core.mesh import Mesh, NormKind
from core.operators import LinearOperatorHandle
from core.problem import ProblemDefinition
from core.state import StateVector
from linearizer.ratios import (
    CoefficientId,
    ParabolicCoefficients,
    RatioCoefficient,
    parabolic_coefficients,
    ratio_array,
)
from utilities.validators import require_finite

ScalarFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ParabolicProblemSpec:
    a: ScalarFn
    a_prime: ScalarFn
    a_second: ScalarFn
    u_initial: Callable[[np.ndarray], np.ndarray]
    gamma: Optional[ScalarFn] = None
    bounds: Tuple[float, float] = (0.5, 2.0)
    check_range: Tuple[float, float] = (-1.0, 1.0)
    x_lo: float = 0.0
    x_hi: float = 1.0
    horizon: float = 0.1
    n_x: int = 32
    n_t: int = 32
    source: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = field(default=None)


def laplacian(n: int, h: float) -> sp.csr_matrix:
    """Three-point ``Delta_h`` with zero Dirichlet data (negative definite)."""
    return (sp.diags([1.0, -2.0, 1.0], [-1, 0, 1], shape=(n, n)) / h**2).tocsr()


def volterra_weights(n_t: int, dt: float) -> np.ndarray:
    """Cumulative trapezoid weights: row ``n`` integrates from 0 to ``t_n``."""
    weights = np.zeros((n_t, n_t))
    for n in range(1, n_t):
        weights[n, : n + 1] = dt
        weights[n, 0] = weights[n, n] = 0.5 * dt
    return weights


class ParabolicProblem(ProblemDefinition):
    family = "parabolic"

    def __init__(self, spec: ParabolicProblemSpec, mesh: Mesh, ratio: RatioCoefficient):
        super().__init__(
            mesh,
            NormKind.DISCRETE_L2,
            {"n_x": spec.n_x, "n_t": spec.n_t, "horizon": spec.horizon},
        )
        self.spec = spec
        self.ratio = ratio
        self.grid_shape = mesh.shape
        n_x, n_t = self.grid_shape
        h, dt = mesh.spacings
        self.space_operator = laplacian(n_x, h)
        self.time_weights = volterra_weights(n_t, dt)
        coupling = sp.kron(self.space_operator, sp.csr_matrix(self.time_weights)).tocsr()
        self.coupling = coupling
        self._dense_coupling = coupling.toarray() if self.dense_allowed() else None
        self._identity = np.eye(mesh.size) if self.dense_allowed() else None

    def _grid(self, values: np.ndarray) -> np.ndarray:
        return np.reshape(values, self.grid_shape)

    def _a(self, u):
        return np.broadcast_to(np.asarray(self.spec.a(u), dtype=float), u.shape)

    def evaluate(self, values):
        gamma = self._grid(self.ratio.gamma_values(values))
        integrated = self.space_operator @ gamma @ self.time_weights.T
        return values - integrated.ravel()

    def derivative_action(self, u, w):
        return w - self.coupling @ (self._a(u) * w)

    def derivative_matrix(self, u):
        if self._dense_coupling is None:
            return None
        return self._identity - self._dense_coupling * self._a(u)[None, :]

    def closed_form_L(self, u):
        flux = ratio_array(self.ratio, CoefficientId.GAMMA_OVER_U, u)
        if self._dense_coupling is not None:
            return LinearOperatorHandle.from_matrix(
                self._identity - self._dense_coupling * flux[None, :], symmetric=False
            )
        return LinearOperatorHandle.from_matrix(
            sp.identity(self.size) - self.coupling @ sp.diags(flux), symmetric=False
        )

    def coefficients(self, u) -> ParabolicCoefficients:
        return parabolic_coefficients(self.ratio, np.asarray(u, dtype=float))

    def right_hand_side(self) -> StateVector:
        """``u0(x) + int_0^t f(x, tau) dtau`` at every node."""
        x, t = self.mesh.axes
        initial = np.broadcast_to(
            np.asarray(self.spec.u_initial(x), dtype=float), x.shape
        )
        values = np.repeat(initial[:, None], t.size, axis=1)
        if self.spec.source is not None:
            X, T = np.meshgrid(x, t, indexing="ij")
            source = np.broadcast_to(np.asarray(self.spec.source(X, T), dtype=float), X.shape)
            values = values + source @ self.time_weights.T
        return self.state(values.ravel())

    def expanded_generator_action(self, u, w) -> np.ndarray:
        """Spatial part of ``L(u) w`` written with all generator coefficients.

        Evaluates ``d/dx[c_flux w_x] + c_w u_xx w + c_grad u_x w_x + c_grad2 u_x^2 w``
        with centred differences at each time level. It agrees with
        ``Delta_h[(gamma(u)/u) w]`` up to O(h^2).
        """
        h = self.mesh.spacings[0]
        U = self._grid(np.asarray(u, dtype=float))
        Wg = self._grid(np.asarray(w, dtype=float))
        coef = self.coefficients(U.ravel())
        c_flux = self._grid(coef.c_flux)
        c_w = self._grid(coef.c_w)
        c_grad = self._grid(coef.c_grad)
        c_grad2 = self._grid(coef.c_grad2)

        def padded(arr):
            return np.pad(arr, ((1, 1), (0, 0)))

        Up, Wp = padded(U), padded(Wg)
        # Boundary flux coefficient is a(0).
        Cp = np.pad(c_flux, ((1, 1), (0, 0)), constant_values=float(self._a(np.zeros(1))[0]))
        face = 0.5 * (Cp[1:] + Cp[:-1])
        flux = face * (Wp[1:] - Wp[:-1]) / h
        divergence = (flux[1:] - flux[:-1]) / h

        u_x = (Up[2:] - Up[:-2]) / (2.0 * h)
        w_x = (Wp[2:] - Wp[:-2]) / (2.0 * h)
        u_xx = (Up[2:] - 2.0 * U + Up[:-2]) / h**2
        result = divergence + c_w * u_xx * Wg + c_grad * u_x * w_x + c_grad2 * u_x**2 * Wg
        return result.ravel()

    def secant_generator_action(self, u, w) -> np.ndarray:
        """``Delta_h[(gamma(u)/u) w]`` at each time level."""
        flux = ratio_array(self.ratio, CoefficientId.GAMMA_OVER_U, np.asarray(u, dtype=float))
        product = self._grid(flux * np.asarray(w, dtype=float))
        return (self.space_operator @ product).ravel()


def _check_diffusivity(spec: ParabolicProblemSpec, ratio: RatioCoefficient) -> None:
    c, m = spec.bounds
    if not 0.0 < c <= m:
        raise InvalidSpecError(f"diffusivity bounds must satisfy 0 < c <= m, got {spec.bounds}")
    lo, hi = spec.check_range
    samples = np.linspace(lo, hi, 101)
    a = np.broadcast_to(require_finite(spec.a(samples), "a(u)"), samples.shape)
    a1 = np.broadcast_to(require_finite(spec.a_prime(samples), "a'(u)"), samples.shape)
    a2 = np.broadcast_to(require_finite(spec.a_second(samples), "a''(u)"), samples.shape)
    if np.min(a) < c - 1e-12 or np.max(a) > m + 1e-12:
        raise InvalidSpecError(f"a(u) leaves [{c}, {m}] on {spec.check_range}")
    if np.max(np.abs(a1)) > m + 1e-12 or np.max(np.abs(a2)) > m + 1e-12:
        raise InvalidSpecError(f"|a'| or |a''| exceeds {m} on {spec.check_range}")

    gamma_zero = float(ratio.gamma_values(np.zeros(1))[0])
    if abs(gamma_zero) > 1e-8:
        raise InvalidSpecError("gamma(0) must vanish")
    delta = 1e-5
    slope = (ratio.gamma_values(samples + delta) - ratio.gamma_values(samples - delta)) / (
        2.0 * delta
    )
    if np.max(np.abs(slope - a) / (1.0 + np.abs(a))) > 1e-8:
        raise InvalidSpecError("gamma is not an antiderivative of a")


def make_parabolic_problem(spec: ParabolicProblemSpec) -> ParabolicProblem:
    """Build the space-time Volterra discretization.

    Raises:
        InvalidSpecError: diffusivity outside its bounds or an inconsistent ``gamma``.
    """
    mesh = Mesh.cylinder(spec.x_lo, spec.x_hi, spec.n_x, spec.horizon, spec.n_t)
    ratio = RatioCoefficient.diffusivity(spec.a, spec.a_prime, spec.a_second, spec.gamma)
    _check_diffusivity(spec, ratio)
    return ParabolicProblem(spec, mesh, ratio)
