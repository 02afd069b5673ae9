"""Direct and Krylov solves for operator handles."""

import warnings
from typing import Optional

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve
from scipy.sparse.linalg import cg, gmres

from config.settings import settings
from core.errors import DimensionError, SingularOperatorError, UnsupportedOperationError
from core.operators import LinearOperatorHandle
from core.state import StateVector
from linsolve.options import SolveMethod, SolveOptions
from utilities.logger import get_logger

logger = get_logger("linsolve")

PIVOT_THRESHOLD = 1e-14


def materialize(L: LinearOperatorHandle) -> np.ndarray:
    """Dense matrix of ``L``; matrix-free handles above the dense limit are refused."""
    if L.dense is not None:
        return np.array(L.dense)
    if L.dimension > settings.dense_limit:
        raise UnsupportedOperationError(
            f"operator of dimension {L.dimension} exceeds the dense limit {settings.dense_limit}"
        )
    return L.to_dense()


def factorize(matrix: np.ndarray):
    """LU factors with a pivot check against ``1e-14 * max|L_ij|``."""
    if not np.all(np.isfinite(matrix)):
        raise SingularOperatorError("operator has non-finite entries")
    scale = float(np.max(np.abs(matrix))) if matrix.size else 0.0
    if scale == 0.0:
        raise SingularOperatorError("operator is identically zero")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(matrix, check_finite=False)
    smallest = float(np.min(np.abs(np.diag(lu))))
    if smallest <= PIVOT_THRESHOLD * scale:
        raise SingularOperatorError(
            f"pivot {smallest:.3e} below {PIVOT_THRESHOLD:.0e} * {scale:.3e}"
        )
    return lu, piv


def _relative_residual(L: LinearOperatorHandle, x: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(L.apply(x) - b) / np.linalg.norm(b))


def direct_residual_limit(opts: SolveOptions) -> float:
    """Relative residual above which a direct solve is reported as singular.

    ``sqrt(rtol)``, i.e. 1e-6 at the default ``rtol = 1e-12``.
    """
    return float(np.sqrt(opts.rtol))


def _solve_dense(L: LinearOperatorHandle, b: np.ndarray, opts: SolveOptions) -> np.ndarray:
    matrix = materialize(L)
    lu, piv = factorize(matrix)
    x = lu_solve((lu, piv), b, check_finite=False)
    if not np.all(np.isfinite(x)):
        raise SingularOperatorError("direct solve produced non-finite values")
    residual = float(np.linalg.norm(matrix @ x - b) / np.linalg.norm(b))
    if residual > direct_residual_limit(opts):
        raise SingularOperatorError(
            f"direct solve residual {residual:.3e} indicates a near-singular operator", residual
        )
    return x


def _solve_krylov(L: LinearOperatorHandle, b: np.ndarray, opts: SolveOptions, method) -> np.ndarray:
    op = L.as_scipy()
    if method is SolveMethod.CONJUGATE_GRADIENT:
        if not (L.symmetric and L.definite):
            raise UnsupportedOperationError(
                "conjugate gradients need an operator declared symmetric and definite"
            )
        x, info = cg(op, b, rtol=opts.rtol, atol=0.0, maxiter=opts.max_iterations)
    else:
        x, info = gmres(
            op, b, rtol=opts.rtol, atol=0.0, restart=opts.restart, maxiter=opts.max_iterations
        )
    if not np.all(np.isfinite(x)):
        raise SingularOperatorError(f"{method.value} produced non-finite values")
    if info != 0:
        residual = _relative_residual(L, x, b)
        raise SingularOperatorError(
            f"{method.value} stopped with info={info}, relative residual {residual:.3e}",
            residual,
        )
    return x


def solve_array(
    L: LinearOperatorHandle, b: np.ndarray, opts: Optional[SolveOptions] = None
) -> np.ndarray:
    """Solve ``L x = b`` for raw arrays."""
    opts = opts or SolveOptions()
    b = np.asarray(b, dtype=float).ravel()
    if b.size != L.dimension:
        raise DimensionError(f"right-hand side has {b.size} entries, operator {L.dimension}")
    if not np.any(b):
        return np.zeros(L.dimension)

    method = opts.method
    if method is SolveMethod.AUTO:
        if L.dense is not None or L.dimension <= settings.dense_limit:
            method = SolveMethod.DENSE_LU
        else:
            method = SolveMethod.GMRES
    logger.debug("solving system of dimension %d with %s", L.dimension, method.value)

    if method is SolveMethod.DENSE_LU:
        return _solve_dense(L, b, opts)
    return _solve_krylov(L, b, opts, method)


def solve(
    L: LinearOperatorHandle, f: StateVector, opts: Optional[SolveOptions] = None
) -> StateVector:
    """Solve ``L w = f`` on the mesh of ``f``.

    Raises:
        DimensionError: ``f`` does not match ``L``.
        SingularOperatorError: tiny pivot, non-finite result or Krylov stagnation.
        UnsupportedOperationError: conjugate gradients on an undeclared operator.
    """
    return f.with_values(solve_array(L, f.values, opts))
