"""Report models shared by the solvers, the certifier and the exporters."""

import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Any, Dict, List, Optional

from core.state import StateVector


class ExitCode(IntEnum):
    """Process exit codes of the command-line tool."""

    OK = 0
    CERTIFICATE_FAILED = 1
    MAX_ITER = 2
    DIVERGED = 3
    SINGULAR = 4
    CONFIG_ERROR = 64
    UNSUPPORTED = 69
    INTERNAL_ERROR = 70


class TerminationReason(str, Enum):
    """Why an iteration stopped."""

    CONVERGED_STEP = "converged-step"
    CONVERGED_RESIDUAL = "converged-residual"
    MAX_ITER = "max-iter"
    DIVERGED = "diverged"
    SINGULAR_L = "singular-L"

    @property
    def converged(self) -> bool:
        return self in (TerminationReason.CONVERGED_STEP, TerminationReason.CONVERGED_RESIDUAL)

    @property
    def exit_code(self) -> ExitCode:
        return {
            TerminationReason.CONVERGED_STEP: ExitCode.OK,
            TerminationReason.CONVERGED_RESIDUAL: ExitCode.OK,
            TerminationReason.MAX_ITER: ExitCode.MAX_ITER,
            TerminationReason.DIVERGED: ExitCode.DIVERGED,
            TerminationReason.SINGULAR_L: ExitCode.SINGULAR,
        }[self]


def _last(values: List[float]) -> Optional[float]:
    return values[-1] if values else None


def summarize(
    method: str,
    step_norms: List[float],
    residual_norms: List[float],
    termination: str,
) -> Dict[str, Any]:
    """Deterministic digest of an iteration history."""
    return {
        "method": method,
        "iterations": len(step_norms),
        "termination": termination,
        "converged": TerminationReason(termination).converged,
        "final_step": _last(step_norms),
        "final_residual": _last(residual_norms),
        "initial_residual": residual_norms[0] if residual_norms else None,
    }


@dataclass
class IterationReport:
    """History of one run of an iterative method.

    ``step_norms[n]`` is ``||u_{n+1} - u_n||``; residual and iterate norms
    include the starting point, so they hold one entry more.
    """

    method: str
    step_norms: List[float] = field(default_factory=list)
    residual_norms: List[float] = field(default_factory=list)
    iterate_norms: List[float] = field(default_factory=list)
    inside_ball: List[bool] = field(default_factory=list)
    final_state: Optional[StateVector] = None
    termination: TerminationReason = TerminationReason.MAX_ITER
    wall_time_ms: float = 0.0
    message: str = ""

    @property
    def iterations(self) -> int:
        return len(self.step_norms)

    @property
    def converged(self) -> bool:
        return self.termination.converged

    @property
    def ratios(self) -> List[float]:
        """``rho_n = step_n / step_{n-1}``; zero where the previous step vanished."""
        out = []
        for prev, curr in zip(self.step_norms[:-1], self.step_norms[1:]):
            out.append(curr / prev if prev > 0.0 else 0.0)
        return out

    @property
    def final_residual(self) -> float:
        return self.residual_norms[-1] if self.residual_norms else math.inf

    def summary(self) -> Dict[str, Any]:
        return summarize(self.method, self.step_norms, self.residual_norms, self.termination.value)

    def to_dict(self, include_state: bool = True) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "method": self.method,
            "termination": self.termination.value,
            "message": self.message,
            "wall_time_ms": self.wall_time_ms,
            "step_norms": list(self.step_norms),
            "residual_norms": list(self.residual_norms),
            "iterate_norms": list(self.iterate_norms),
            "ratios": self.ratios,
            "inside_ball": list(self.inside_ball),
            "summary": self.summary(),
        }
        if include_state and self.final_state is not None:
            payload["final_state"] = self.final_state.values.tolist()
        return payload

    @staticmethod
    def summary_from_dict(payload: Dict[str, Any]) -> Dict[str, Any]:
        """Rebuild the summary of a report loaded from JSON."""
        return summarize(
            payload["method"],
            payload["step_norms"],
            payload["residual_norms"],
            payload["termination"],
        )


@dataclass(frozen=True)
class InvertibilityVerdict:
    """Neumann-series check ``p s < 1`` with the bound ``p / (1 - p s)``."""

    p: float
    s: float
    ps: float
    holds: bool
    inverse_bound: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "s": self.s,
            "ps": self.ps,
            "holds": self.holds,
            "inverse_bound": self.inverse_bound,
        }


@dataclass
class Certificate:
    """Empirical evidence for invertibility and contraction on ``B_R``.

    Sampled estimates are lower bounds of the true suprema; a passing
    certificate is evidence, not proof.
    """

    R: float
    q: float
    Q: float
    f_norm: float
    S_radius: float
    contraction_holds: bool
    norm_kind: str
    p: Optional[float] = None
    s: Optional[float] = None
    ps: Optional[float] = None
    inverse_bound: Optional[float] = None
    invertibility_holds: Optional[bool] = None
    q_derivative: Optional[float] = None
    sample_count: int = 0
    tags: Dict[str, str] = field(default_factory=dict)
    empirical: bool = True
    mixed_norms: bool = False

    @property
    def holds(self) -> bool:
        invertible = self.invertibility_holds is not False
        return invertible and self.contraction_holds

    def attach_invertibility(self, verdict: InvertibilityVerdict) -> None:
        self.p = verdict.p
        self.s = verdict.s
        self.ps = verdict.ps
        self.inverse_bound = verdict.inverse_bound
        self.invertibility_holds = verdict.holds

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "s": self.s,
            "ps": self.ps,
            "inverse_bound": self.inverse_bound,
            "invertibility_holds": self.invertibility_holds,
            "q": self.q,
            "q_derivative": self.q_derivative,
            "Q": self.Q,
            "R": self.R,
            "f_norm": self.f_norm,
            "S_radius": self.S_radius,
            "contraction_holds": self.contraction_holds,
            "holds": self.holds,
            "sample_count": self.sample_count,
            "norm_kind": self.norm_kind,
            "tags": dict(self.tags),
            "empirical": self.empirical,
            "mixed_norms": self.mixed_norms,
        }
