"""Tensor-product meshes for the discretized problem families."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple

import numpy as np

from core.errors import InvalidArgumentError


class MeshKind(str, Enum):
    """Geometry of a mesh."""

    INTERVAL = "interval"
    RECTANGLE = "rectangle"
    SPACE_TIME_CYLINDER = "space-time-cylinder"


class NormKind(str, Enum):
    """Norm attached to a state vector."""

    SUP = "sup"
    DISCRETE_L2 = "discrete-L2"


_AXIS_COUNT = {
    MeshKind.INTERVAL: 1,
    MeshKind.RECTANGLE: 2,
    MeshKind.SPACE_TIME_CYLINDER: 2,
}


def _freeze(values: np.ndarray) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Mesh:
    """Uniform tensor-product grid.

    Values on the mesh are stored in C order over ``axes``; for a space-time
    cylinder the last axis is time, so time varies fastest.
    """

    kind: MeshKind
    axes: Tuple[np.ndarray, ...]
    spacings: Tuple[float, ...] = field(init=False)

    def __post_init__(self):
        kind = MeshKind(self.kind)
        if len(self.axes) != _AXIS_COUNT[kind]:
            raise InvalidArgumentError(
                f"{kind.value} mesh needs {_AXIS_COUNT[kind]} axes, got {len(self.axes)}"
            )
        axes = tuple(_freeze(axis) for axis in self.axes)
        spacings = []
        for index, axis in enumerate(axes):
            if axis.ndim != 1 or axis.size < 3:
                raise InvalidArgumentError(f"axis {index} needs at least 3 nodes")
            steps = np.diff(axis)
            if np.any(steps <= 0.0):
                raise InvalidArgumentError(f"axis {index} is not strictly increasing")
            h0 = float(steps[0])
            if np.max(np.abs(steps - h0)) > 1e-12 * max(h0, 1.0):
                raise InvalidArgumentError(f"axis {index} is not uniformly spaced")
            spacings.append(h0)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "spacings", tuple(spacings))

    # Constructors ---------------------------------------------------------
    @classmethod
    def interior_interval(cls, lo: float, hi: float, n: int) -> "Mesh":
        """Interior nodes of a Dirichlet interval: ``h = (hi - lo) / (n + 1)``."""
        if hi <= lo:
            raise InvalidArgumentError("interval bounds must satisfy lo < hi")
        h = (hi - lo) / (n + 1)
        return cls(MeshKind.INTERVAL, (lo + h * np.arange(1, n + 1),))

    @classmethod
    def closed_interval(cls, lo: float, hi: float, n: int) -> "Mesh":
        """``n`` nodes including both endpoints."""
        if hi <= lo:
            raise InvalidArgumentError("interval bounds must satisfy lo < hi")
        return cls(MeshKind.INTERVAL, (np.linspace(lo, hi, n),))

    @classmethod
    def interior_rectangle(cls, lo: float, hi: float, n: int) -> "Mesh":
        """Interior nodes of the square ``[lo, hi]^2`` with ``n`` nodes per side."""
        if hi <= lo:
            raise InvalidArgumentError("rectangle bounds must satisfy lo < hi")
        h = (hi - lo) / (n + 1)
        axis = lo + h * np.arange(1, n + 1)
        return cls(MeshKind.RECTANGLE, (axis, axis.copy()))

    @classmethod
    def cylinder(cls, lo: float, hi: float, n_x: int, horizon: float, n_t: int) -> "Mesh":
        """Interior space nodes times ``n_t`` time levels on ``[0, horizon]``."""
        if hi <= lo or horizon <= 0.0:
            raise InvalidArgumentError("cylinder needs lo < hi and a positive horizon")
        h = (hi - lo) / (n_x + 1)
        x = lo + h * np.arange(1, n_x + 1)
        return cls(MeshKind.SPACE_TIME_CYLINDER, (x, np.linspace(0.0, horizon, n_t)))

    # Geometry -------------------------------------------------------------
    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(axis.size for axis in self.axes)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacings))

    @property
    def dimension(self) -> int:
        return len(self.axes)

    def grid(self) -> Tuple[np.ndarray, ...]:
        """Flattened coordinates, one array per axis, in storage order."""
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return tuple(m.ravel() for m in mesh)

    def coordinates(self) -> np.ndarray:
        """Node coordinates as an ``(N, d)`` array."""
        return np.column_stack(self.grid())

    def same_as(self, other: "Mesh") -> bool:
        if self is other:
            return True
        return (
            self.kind == other.kind
            and self.shape == other.shape
            and all(np.array_equal(a, b) for a, b in zip(self.axes, other.axes))
        )

    def __repr__(self) -> str:
        return f"Mesh(kind={self.kind.value}, shape={self.shape})"
