"""Gauss–Legendre rules on [0, 1]."""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from core.errors import InvalidArgumentError


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes in (0, 1) with weights summing to one."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1 or nodes.size == 0:
            raise InvalidArgumentError("nodes and weights must be matching non-empty vectors")
        if np.any(nodes <= 0.0) or np.any(nodes >= 1.0):
            raise InvalidArgumentError("quadrature nodes must lie in (0, 1)")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise InvalidArgumentError(f"weights sum to {weights.sum()!r}, expected 1")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def order(self) -> int:
        return self.nodes.size

    def integrate(self, fn) -> float:
        """Apply the rule to a vectorized scalar function of t."""
        return float(np.dot(self.weights, fn(self.nodes)))


@lru_cache(maxsize=32)
def gauss_legendre(order: int = 8) -> QuadratureRule:
    """``order``-point Gauss–Legendre rule mapped from [-1, 1] to [0, 1]."""
    if order < 1:
        raise InvalidArgumentError("quadrature order must be at least 1")
    x, w = np.polynomial.legendre.leggauss(order)
    return QuadratureRule(nodes=0.5 * (x + 1.0), weights=0.5 * w)
