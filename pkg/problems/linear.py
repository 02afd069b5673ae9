"""Linear fixture ``A(u) = M u``; its linearization is ``M`` itself."""

from typing import Optional, Tuple, Union

import numpy as np

from core.errors import DimensionError
from core.mesh import Mesh, NormKind
from core.operators import LinearOperatorHandle
from core.problem import ProblemDefinition


class LinearProblem(ProblemDefinition):
    family = "linear"

    def __init__(
        self,
        matrix,
        mesh: Mesh,
        norm_kind: Union[NormKind, str] = NormKind.DISCRETE_L2,
        identity_split: bool = False,
        parameters: Optional[dict] = None,
    ):
        super().__init__(mesh, norm_kind, parameters)
        self.matrix = np.array(matrix, dtype=float)
        if self.matrix.shape != (mesh.size, mesh.size):
            raise DimensionError(
                f"matrix of shape {self.matrix.shape} does not fit a mesh of size {mesh.size}"
            )
        self.matrix.setflags(write=False)
        self._symmetric = bool(np.allclose(self.matrix, self.matrix.T, rtol=0.0, atol=1e-12))
        self._definite = self._symmetric and float(np.linalg.eigvalsh(self.matrix)[0]) > 0.0
        self._identity_split = identity_split

    def evaluate(self, values):
        return self.matrix @ values

    def derivative_action(self, u, w):
        return self.matrix @ w

    def derivative_matrix(self, u):
        return np.array(self.matrix)

    def operator_flags(self, u) -> Tuple[bool, bool]:
        return self._symmetric, self._definite

    def closed_form_L(self, u):
        return LinearOperatorHandle.from_matrix(
            self.matrix, symmetric=self._symmetric, definite=self._definite
        )

    @property
    def has_identity_split(self) -> bool:
        return self._identity_split

    def nonlinear_part(self, values):
        if not self._identity_split:
            return super().nonlinear_part(values)
        return self.matrix @ values - values
