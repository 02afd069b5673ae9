"""Discrete state vectors and their norms."""

from typing import Callable, Union

import numpy as np

from core.errors import DimensionError, InvalidStateError
from core.mesh import Mesh, NormKind


class StateVector:
    """Immutable vector of nodal values on a mesh."""

    __slots__ = ("_values", "mesh", "norm_kind")

    def __init__(self, values, mesh: Mesh, norm_kind: Union[NormKind, str] = NormKind.SUP):
        arr = np.array(values, dtype=float).ravel()
        if arr.size != mesh.size:
            raise DimensionError(f"expected {mesh.size} values, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise InvalidStateError("state vector contains non-finite values")
        arr.setflags(write=False)
        self._values = arr
        self.mesh = mesh
        self.norm_kind = NormKind(norm_kind)

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def size(self) -> int:
        return self._values.size

    @classmethod
    def zeros(cls, mesh: Mesh, norm_kind: Union[NormKind, str] = NormKind.SUP) -> "StateVector":
        return cls(np.zeros(mesh.size), mesh, norm_kind)

    @classmethod
    def from_function(
        cls,
        mesh: Mesh,
        fn: Callable[..., np.ndarray],
        norm_kind: Union[NormKind, str] = NormKind.SUP,
    ) -> "StateVector":
        """Sample ``fn(*grid)`` at the mesh nodes."""
        values = np.broadcast_to(np.asarray(fn(*mesh.grid()), dtype=float), (mesh.size,))
        return cls(values, mesh, norm_kind)

    def with_values(self, values) -> "StateVector":
        return StateVector(values, self.mesh, self.norm_kind)

    def norm(self) -> float:
        return norm(self)

    def _check(self, other: "StateVector") -> None:
        if not self.mesh.same_as(other.mesh):
            raise DimensionError("state vectors live on different meshes")

    def __add__(self, other: "StateVector") -> "StateVector":
        self._check(other)
        return self.with_values(self._values + other.values)

    def __sub__(self, other: "StateVector") -> "StateVector":
        self._check(other)
        return self.with_values(self._values - other.values)

    def __mul__(self, scalar: float) -> "StateVector":
        return self.with_values(float(scalar) * self._values)

    __rmul__ = __mul__

    def __neg__(self) -> "StateVector":
        return self.with_values(-self._values)

    def __repr__(self) -> str:
        return f"StateVector(size={self.size}, norm_kind={self.norm_kind.value})"


def norm_of_array(values: np.ndarray, norm_kind: Union[NormKind, str], cell_volume: float) -> float:
    """Norm of a raw value array; sup is ``max|v|``, discrete L2 weights by the cell volume."""
    arr = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidStateError("cannot take the norm of non-finite values")
    if arr.size == 0:
        return 0.0
    if NormKind(norm_kind) is NormKind.SUP:
        return float(np.max(np.abs(arr)))
    return float(np.sqrt(np.dot(arr, arr) * cell_volume))


def norm(v: StateVector) -> float:
    """Norm of ``v`` in its own norm kind."""
    return norm_of_array(v.values, v.norm_kind, v.mesh.cell_volume)
