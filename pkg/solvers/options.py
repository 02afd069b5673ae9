"""Iteration options shared by every solver."""

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from config.settings import settings
from linearizer.quadrature import QuadratureRule, gauss_legendre
from linsolve.options import SolveOptions


class IterationOptions(BaseModel):
    """Stopping rules and inner-solve settings.

    A run converges once ``residual <= residual_tolerance * (1 + ||f||)``; it is
    labelled ``converged-step`` when ``step <= step_tolerance * (1 + ||u_n||)``
    held on the same iteration. A small step with a large residual keeps iterating.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    max_iterations: int = Field(default=100, ge=1)
    step_tolerance: float = Field(default=1e-10, gt=0.0)
    residual_tolerance: float = Field(default=1e-10, gt=0.0)
    quadrature_order: int = Field(default_factory=lambda: settings.quadrature_order, ge=1)
    solve: SolveOptions = Field(default_factory=SolveOptions)
    radius: Optional[float] = Field(default=None, gt=0.0)
    use_closed_form: bool = False

    @property
    def rule(self) -> QuadratureRule:
        return gauss_legendre(self.quadrature_order)
