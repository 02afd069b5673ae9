"""
Run configuration
=================
JSON documents validated with pydantic. Unknown keys are rejected and every
validation failure is reported as a ``ConfigError`` naming the offending key.
"""

import json
from pathlib import Path
from typing import Annotated, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from config.settings import settings
from core.errors import ConfigError
from core.mesh import NormKind
from solvers.options import IterationOptions


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ProblemBase(StrictModel):
    parameters: Dict[str, float] = Field(default_factory=dict)


class LinearConfig(ProblemBase):
    family: Literal["linear"]
    matrix: List[List[float]]
    norm: NormKind = NormKind.DISCRETE_L2
    identity_split: bool = False
    x_lo: float = 0.0
    x_hi: float = 1.0

    @model_validator(mode="after")
    def _square(self):
        n = len(self.matrix)
        if n < 3 or any(len(row) != n for row in self.matrix):
            raise ValueError("matrix must be square with at least 3 rows")
        return self


class PointwiseCubicConfig(ProblemBase):
    family: Literal["pointwise-cubic"]
    n_nodes: int = Field(default=3, ge=3)


class IntegralConfig(ProblemBase):
    family: Literal["integral"]
    kernel: str
    g: str
    g_prime: Optional[str] = None
    x_lo: float = 0.0
    x_hi: float = 1.0
    n_nodes: int = Field(default=33, ge=3)
    symmetric: bool = False


class EllipticConfig(ProblemBase):
    family: Literal["elliptic"]
    g: str
    g_u: Optional[str] = None
    split_a: Optional[float] = Field(default=None, gt=0.0)
    dimension: Literal[1, 2] = 1
    n: int = Field(default=64, ge=3)
    lo: float = 0.0
    hi: float = 1.0


class ParabolicConfig(ProblemBase):
    family: Literal["parabolic"]
    a: str
    a_prime: Optional[str] = None
    a_second: Optional[str] = None
    gamma: Optional[str] = None
    bounds: Tuple[float, float] = (0.5, 2.0)
    check_range: Tuple[float, float] = (-1.0, 1.0)
    x_lo: float = 0.0
    x_hi: float = 1.0
    horizon: float = Field(default=0.1, gt=0.0)
    n_x: int = Field(default=32, ge=3)
    n_t: int = Field(default=32, ge=3)
    initial: str = "sin(pi*x)"
    source: Optional[str] = None


ProblemConfig = Annotated[
    Union[LinearConfig, PointwiseCubicConfig, IntegralConfig, EllipticConfig, ParabolicConfig],
    Field(discriminator="family"),
]


class RhsConfig(StrictModel):
    """``f``: a manufactured solution pushed through ``A``, an expression, zero, or the
    family's own data (parabolic: ``u0 + int_0^t source``)."""

    source: Literal["manufactured", "expression", "zero", "problem"] = "expression"
    expression: Optional[str] = None
    amplitude: float = 1.0

    @model_validator(mode="after")
    def _needs_expression(self):
        if self.source in ("manufactured", "expression") and not self.expression:
            raise ValueError(f"rhs source {self.source!r} needs an expression")
        return self


class InitialConfig(StrictModel):
    source: Literal["f", "zero", "expression"] = "f"
    expression: Optional[str] = None

    @model_validator(mode="after")
    def _needs_expression(self):
        if self.source == "expression" and not self.expression:
            raise ValueError("initial source 'expression' needs an expression")
        return self


class CertificateConfig(StrictModel):
    radius: float = Field(default=1.0, gt=0.0)
    samples: int = Field(default=20, ge=1)
    t_points: int = Field(default=5, ge=2)
    pairs: int = Field(default=10, ge=1)
    seed: Optional[int] = Field(default=None, ge=0)


class CompareConfig(StrictModel):
    methods: List[Literal["global", "newton", "picard"]] = Field(
        default_factory=lambda: ["global", "newton", "picard"], min_length=1
    )


class SweepConfig(StrictModel):
    """``parameter`` is ``f_amplitude`` or a name in ``problem.parameters``."""

    parameter: str = "f_amplitude"
    values: List[float] = Field(default_factory=list)


class OutputConfig(StrictModel):
    directory: str = Field(default_factory=lambda: settings.output_dir)
    report: str = "report.json"
    table: str = "table.csv"


class RunConfig(StrictModel):
    problem: ProblemConfig
    rhs: RhsConfig = Field(default_factory=RhsConfig)
    initial: InitialConfig = Field(default_factory=InitialConfig)
    iteration: IterationOptions = Field(default_factory=IterationOptions)
    certificate: CertificateConfig = Field(default_factory=CertificateConfig)
    compare: CompareConfig = Field(default_factory=CompareConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)

    @classmethod
    def from_dict(cls, payload: dict) -> "RunConfig":
        try:
            return cls.model_validate(payload)
        except ValidationError as exc:
            first = exc.errors()[0]
            key = ".".join(str(part) for part in first["loc"])
            raise ConfigError(f"invalid config at {key!r}: {first['msg']}", key=key) from exc

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "RunConfig":
        try:
            with open(path, "r", encoding="utf-8") as f:
                payload = json.load(f)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(payload, dict):
            raise ConfigError("config root must be a JSON object")
        return cls.from_dict(payload)
