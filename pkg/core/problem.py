"""
Abstract nonlinear problem contract
===================================
Every problem family subclasses ``ProblemDefinition`` and overrides
``evaluate`` and ``derivative_action``. Dense derivatives, the closed-form
linearization and the ``A = I + B`` split are optional capabilities.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from config.settings import settings
from core.errors import DimensionError, UnsupportedOperationError
from core.mesh import Mesh, NormKind
from core.operators import LinearOperatorHandle
from core.state import StateVector, norm


class ProblemDefinition(ABC):
    """Base class for discretized operators ``A`` with ``A(0) = 0``."""

    family: str = "abstract"

    def __init__(
        self,
        mesh: Mesh,
        norm_kind: Union[NormKind, str],
        parameters: Optional[Dict[str, Any]] = None,
    ):
        self.mesh = mesh
        self.norm_kind = NormKind(norm_kind)
        self.parameters: Dict[str, Any] = dict(parameters or {})

    @property
    def size(self) -> int:
        return self.mesh.size

    # Required -------------------------------------------------------------
    @abstractmethod
    def evaluate(self, values: np.ndarray) -> np.ndarray:
        """Return ``A(u)`` for raw nodal values."""
        raise NotImplementedError("Each problem must implement its own evaluate method.")

    @abstractmethod
    def derivative_action(self, u: np.ndarray, w: np.ndarray) -> np.ndarray:
        """Return ``A'(u) w``."""
        raise NotImplementedError("Each problem must implement its own derivative action.")

    # Optional -------------------------------------------------------------
    def derivative_matrix(self, u: np.ndarray) -> Optional[np.ndarray]:
        """Dense ``A'(u)``, or ``None`` when the problem is too large or matrix-free."""
        return None

    def operator_flags(self, u: np.ndarray) -> Tuple[bool, bool]:
        """``(symmetric, definite)`` declarations for ``A'(u)`` and ``L(u)``."""
        return False, False

    def closed_form_L(self, u: np.ndarray) -> LinearOperatorHandle:
        raise UnsupportedOperationError(f"{self.family} problems have no closed-form L(u)")

    @property
    def has_identity_split(self) -> bool:
        return False

    def nonlinear_part(self, values: np.ndarray) -> np.ndarray:
        """``B(u)`` for problems written as ``A = I + B``."""
        raise UnsupportedOperationError(f"{self.family} problems are not of the form I + B")

    def describe(self) -> Dict[str, Any]:
        return {
            "family": self.family,
            "size": self.size,
            "mesh": self.mesh.kind.value,
            "norm": self.norm_kind.value,
            "parameters": dict(self.parameters),
        }

    # Helpers --------------------------------------------------------------
    def dense_allowed(self) -> bool:
        return self.size <= settings.dense_limit

    def derivative_operator(self, u: np.ndarray) -> LinearOperatorHandle:
        """``A'(u)`` as an operator handle, dense when available."""
        symmetric, definite = self.operator_flags(u)
        dense = self.derivative_matrix(u)
        if dense is not None:
            return LinearOperatorHandle.from_matrix(dense, symmetric=symmetric, definite=definite)
        u_frozen = np.array(u, dtype=float)
        return LinearOperatorHandle(
            dimension=self.size,
            matvec=lambda w: self.derivative_action(u_frozen, w),
            symmetric=symmetric,
            definite=definite,
        )

    def state(self, values) -> StateVector:
        return StateVector(values, self.mesh, self.norm_kind)

    def zero_state(self) -> StateVector:
        return StateVector.zeros(self.mesh, self.norm_kind)

    def norm_of(self, values: np.ndarray) -> float:
        return norm(self.state(values))

    def check_state(self, u: StateVector) -> None:
        if not self.mesh.same_as(u.mesh):
            raise DimensionError(
                f"state on {u.mesh!r} does not match problem mesh {self.mesh!r}"
            )


def evaluate_A(problem: ProblemDefinition, u: StateVector) -> StateVector:
    """``A(u)`` on the problem mesh."""
    problem.check_state(u)
    return problem.state(problem.evaluate(u.values))


def apply_derivative(problem: ProblemDefinition, u: StateVector, w: StateVector) -> StateVector:
    """``A'(u) w``."""
    problem.check_state(u)
    problem.check_state(w)
    return problem.state(problem.derivative_action(u.values, w.values))


def central_difference_derivative(
    problem: ProblemDefinition, u: StateVector, w: StateVector
) -> StateVector:
    """Central quotient ``(A(u + t w) - A(u - t w)) / 2t`` with a scaled step."""
    problem.check_state(u)
    problem.check_state(w)
    t = 1e-6 * (1.0 + norm(u)) / (1.0 + norm(w))
    forward = problem.evaluate(u.values + t * w.values)
    backward = problem.evaluate(u.values - t * w.values)
    return problem.state((forward - backward) / (2.0 * t))
