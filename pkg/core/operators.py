"""Linear operator handles produced by the linearizer and consumed by linsolve."""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.sparse.linalg import LinearOperator

from core.errors import DimensionError

MatVec = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class LinearOperatorHandle:
    """A linear map on R^N given by its action and, when cheap, a dense matrix.

    ``symmetric`` and ``definite`` are declarations used to pick a Krylov
    method; they are not verified here.
    """

    dimension: int
    matvec: MatVec
    dense: Optional[np.ndarray] = None
    rmatvec: Optional[MatVec] = None
    symmetric: bool = False
    definite: bool = False

    def __post_init__(self):
        if self.dense is not None:
            dense = np.array(self.dense, dtype=float)
            if dense.shape != (self.dimension, self.dimension):
                raise DimensionError(
                    f"dense realization has shape {dense.shape}, expected "
                    f"({self.dimension}, {self.dimension})"
                )
            dense.setflags(write=False)
            object.__setattr__(self, "dense", dense)

    @classmethod
    def from_matrix(cls, matrix, symmetric: Optional[bool] = None, definite: bool = False):
        """Wrap a dense array or scipy sparse matrix."""
        if hasattr(matrix, "toarray"):
            sparse = matrix.tocsr()
            n = sparse.shape[0]
            sym = symmetric if symmetric is not None else False
            return cls(
                dimension=n,
                matvec=lambda w: sparse @ w,
                rmatvec=lambda w: sparse.T @ w,
                symmetric=sym,
                definite=definite,
            )
        dense = np.asarray(matrix, dtype=float)
        if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
            raise DimensionError("operator matrix must be square")
        if symmetric is None:
            symmetric = bool(np.allclose(dense, dense.T, rtol=0.0, atol=1e-12))
        frozen = dense.copy()
        return cls(
            dimension=dense.shape[0],
            matvec=lambda w: frozen @ w,
            dense=frozen,
            rmatvec=lambda w: frozen.T @ w,
            symmetric=symmetric,
            definite=definite,
        )

    def apply(self, w) -> np.ndarray:
        arr = np.asarray(w, dtype=float)
        if arr.shape != (self.dimension,):
            raise DimensionError(f"expected vector of length {self.dimension}")
        return np.asarray(self.matvec(arr), dtype=float).ravel()

    def apply_transpose(self, w) -> np.ndarray:
        if self.dense is not None:
            return self.dense.T @ np.asarray(w, dtype=float)
        if self.rmatvec is None:
            if self.symmetric:
                return self.apply(w)
            return self.to_dense().T @ np.asarray(w, dtype=float)
        return np.asarray(self.rmatvec(np.asarray(w, dtype=float)), dtype=float).ravel()

    def to_dense(self) -> np.ndarray:
        """Dense matrix, built column by column when only the action is known."""
        if self.dense is not None:
            return np.array(self.dense)
        eye = np.eye(self.dimension)
        return np.column_stack([self.apply(eye[:, j]) for j in range(self.dimension)])

    def as_scipy(self) -> LinearOperator:
        rmatvec = self.rmatvec
        if rmatvec is None and self.symmetric:
            rmatvec = self.matvec
        return LinearOperator(
            (self.dimension, self.dimension),
            matvec=self.apply,
            rmatvec=rmatvec,
            dtype=float,
        )

    def __sub__(self, other: "LinearOperatorHandle") -> "LinearOperatorHandle":
        if other.dimension != self.dimension:
            raise DimensionError("operator dimensions differ")
        if self.dense is not None and other.dense is not None:
            return LinearOperatorHandle.from_matrix(self.dense - other.dense)
        return LinearOperatorHandle(
            dimension=self.dimension,
            matvec=lambda w: self.apply(w) - other.apply(w),
            rmatvec=lambda w: self.apply_transpose(w) - other.apply_transpose(w),
            symmetric=self.symmetric and other.symmetric,
        )
