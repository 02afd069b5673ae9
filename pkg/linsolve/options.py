"""Options for linear solves."""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field


class SolveMethod(str, Enum):
    AUTO = "auto"
    DENSE_LU = "dense-LU"
    CONJUGATE_GRADIENT = "conjugate-gradient"
    GMRES = "gmres"


class SolveOptions(BaseModel):
    """How ``L w = f`` is solved; ``auto`` uses dense LU up to the dense limit, GMRES beyond."""

    model_config = ConfigDict(frozen=True, extra="forbid", use_enum_values=False)

    method: SolveMethod = SolveMethod.AUTO
    rtol: float = Field(default=1e-12, gt=0.0, lt=1.0)
    max_iterations: int = Field(default=1000, ge=1)
    restart: int = Field(default=30, ge=1)
