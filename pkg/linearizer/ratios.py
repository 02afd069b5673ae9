"""
Removable-singularity coefficients
==================================
Closed-form linearizations divide by the state value ``u``. Each ratio below
has a finite limit at ``u = 0``; ``ratio_array`` switches to that limit when
``|u| <= eps``.

    g-over-u        g(u)/u                                  -> g'(0)
    a-diff-over-u   (a(u) - a(0))/u                         -> a'(0)
    gamma-over-u    gamma(u)/u                              -> a(0)
    drift           (u a(u) - gamma(u))/u^2                 -> a'(0)/2
    curvature       (a'(u) u^2 - 2 u a(u) + 2 gamma(u))/u^3 -> a''(0)/3

with ``gamma(u) = \\int_0^u a(s) ds``.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Union

import numpy as np

from config.settings import settings
from core.errors import InvalidArgumentError
from linearizer.quadrature import gauss_legendre

ScalarFn = Callable[[np.ndarray], np.ndarray]

# Above this magnitude the literal curvature ratio is accurate to ~1e-12.
CURVATURE_BAND = 1e-2


class CoefficientId(str, Enum):
    G_OVER_U = "g-over-u"
    A_DIFF_OVER_U = "a-diff-over-u"
    GAMMA_OVER_U = "gamma-over-u"
    DRIFT = "drift"
    CURVATURE = "curvature"


def _call(fn: Optional[ScalarFn], u: np.ndarray, name: str) -> np.ndarray:
    if fn is None:
        raise InvalidArgumentError(f"coefficient function {name!r} is required")
    return np.broadcast_to(np.asarray(fn(u), dtype=float), u.shape)


def gamma_by_quadrature(a: ScalarFn, order: int = 16) -> ScalarFn:
    """``gamma(u) = u * sum_k w_k a(t_k u)``; exact for polynomial ``a`` of degree < 2*order."""
    rule = gauss_legendre(order)

    def gamma(u):
        u = np.asarray(u, dtype=float)
        total = np.zeros_like(u)
        for t_k, w_k in zip(rule.nodes, rule.weights):
            total = total + w_k * _call(a, t_k * u, "a")
        return u * total

    return gamma


@dataclass(frozen=True)
class RatioCoefficient:
    """Scalar nonlinearities feeding the ratio evaluators.

    Reaction terms supply ``g`` and ``g_prime``; diffusivities supply
    ``a``, ``a_prime``, ``a_second`` and optionally ``gamma``.
    """

    g: Optional[ScalarFn] = None
    g_prime: Optional[ScalarFn] = None
    a: Optional[ScalarFn] = None
    a_prime: Optional[ScalarFn] = None
    a_second: Optional[ScalarFn] = None
    gamma: Optional[ScalarFn] = None
    eps: Optional[float] = None

    @classmethod
    def reaction(cls, g: ScalarFn, g_prime: ScalarFn, eps: Optional[float] = None):
        return cls(g=g, g_prime=g_prime, eps=eps)

    @classmethod
    def diffusivity(
        cls,
        a: ScalarFn,
        a_prime: ScalarFn,
        a_second: ScalarFn,
        gamma: Optional[ScalarFn] = None,
        eps: Optional[float] = None,
    ):
        return cls(
            a=a,
            a_prime=a_prime,
            a_second=a_second,
            gamma=gamma if gamma is not None else gamma_by_quadrature(a),
            eps=eps,
        )

    @property
    def threshold(self) -> float:
        return settings.ratio_eps if self.eps is None else self.eps

    def gamma_values(self, u: np.ndarray) -> np.ndarray:
        gamma = self.gamma if self.gamma is not None else gamma_by_quadrature(self.a)
        return _call(gamma, u, "gamma")


def _curvature_integral(coef: RatioCoefficient, u: np.ndarray) -> np.ndarray:
    rule = gauss_legendre(8)
    total = np.zeros_like(u)
    for t_k, w_k in zip(rule.nodes, rule.weights):
        total = total + w_k * t_k**2 * _call(coef.a_second, t_k * u, "a_second")
    return total


def ratio_array(
    coef: RatioCoefficient, which: Union[CoefficientId, str], u_values
) -> np.ndarray:
    """Elementwise ratio with the Taylor limit on ``|u| <= eps``."""
    which = CoefficientId(which)
    u = np.atleast_1d(np.asarray(u_values, dtype=float))
    small = np.abs(u) <= coef.threshold
    safe = np.where(small, 1.0, u)
    zero = np.zeros_like(u)

    if which is CoefficientId.G_OVER_U:
        literal = _call(coef.g, u, "g") / safe
        limit = _call(coef.g_prime, zero, "g_prime")
    elif which is CoefficientId.A_DIFF_OVER_U:
        literal = (_call(coef.a, u, "a") - _call(coef.a, zero, "a")) / safe
        limit = _call(coef.a_prime, zero, "a_prime")
    elif which is CoefficientId.GAMMA_OVER_U:
        literal = coef.gamma_values(u) / safe
        limit = _call(coef.a, zero, "a")
    elif which is CoefficientId.DRIFT:
        literal = (u * _call(coef.a, u, "a") - coef.gamma_values(u)) / safe**2
        limit = 0.5 * _call(coef.a_prime, zero, "a_prime")
    else:
        numerator = (
            _call(coef.a_prime, u, "a_prime") * u**2
            - 2.0 * u * _call(coef.a, u, "a")
            + 2.0 * coef.gamma_values(u)
        )
        literal = numerator / safe**3
        band = (~small) & (np.abs(u) <= CURVATURE_BAND)
        if np.any(band):
            literal = np.where(band, _curvature_integral(coef, u), literal)
        limit = _call(coef.a_second, zero, "a_second") / 3.0

    return np.where(small, limit, literal)


def ratio_eval(coef: RatioCoefficient, which: Union[CoefficientId, str], u_val: float) -> float:
    """Scalar form of :func:`ratio_array`.

    >>> ratio_eval(RatioCoefficient.reaction(lambda u: u**3, lambda u: 3 * u**2), "g-over-u", 2.0)
    4.0
    """
    return float(ratio_array(coef, which, np.array([u_val]))[0])


@dataclass(frozen=True)
class ParabolicCoefficients:
    """Coefficients of the integrated quasilinear generator.

    ``c_flux`` multiplies the flux term of the assembled operator; ``c_lap``
    is the difference quotient of the diffusivity and is reported alongside.
    """

    c_lap: Union[float, np.ndarray]
    c_w: Union[float, np.ndarray]
    c_grad: Union[float, np.ndarray]
    c_grad2: Union[float, np.ndarray]
    c_flux: Union[float, np.ndarray]

    def as_tuple(self):
        return self.c_lap, self.c_w, self.c_grad, self.c_grad2


def parabolic_coefficients(coef: RatioCoefficient, u_val) -> ParabolicCoefficients:
    """Evaluate the generator coefficients at a scalar or array of states."""
    scalar = np.ndim(u_val) == 0
    u = np.atleast_1d(np.asarray(u_val, dtype=float))
    c_lap = ratio_array(coef, CoefficientId.A_DIFF_OVER_U, u)
    drift = ratio_array(coef, CoefficientId.DRIFT, u)
    c_grad2 = ratio_array(coef, CoefficientId.CURVATURE, u)
    c_flux = ratio_array(coef, CoefficientId.GAMMA_OVER_U, u)
    if scalar:
        return ParabolicCoefficients(
            float(c_lap[0]), float(drift[0]), float(drift[0]), float(c_grad2[0]), float(c_flux[0])
        )
    return ParabolicCoefficients(c_lap, drift, drift.copy(), c_grad2, c_flux)
