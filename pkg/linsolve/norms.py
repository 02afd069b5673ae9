"""Operator and inverse-operator norm estimates."""

from typing import Optional, Union

import numpy as np
from scipy.linalg import lu_solve, svdvals

from config.settings import settings
from core.errors import InvalidArgumentError, SingularOperatorError, UnsupportedOperationError
from core.mesh import NormKind
from core.operators import LinearOperatorHandle
from linsolve.options import SolveOptions
from linsolve.solve import factorize, materialize, solve_array
from utilities.logger import get_logger

logger = get_logger("norms")

SINGULAR_RATIO = 1e-14


def sup_norm_of_matrix(matrix: np.ndarray) -> float:
    """Maximum absolute row sum."""
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(matrix), axis=1)))


def power_iteration(apply_normal, dimension: int, iterations: int, seed: int) -> float:
    """Largest eigenvalue of a symmetric positive semidefinite map given by its action."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(dimension)
    x /= np.linalg.norm(x)
    estimate = 0.0
    for _ in range(iterations):
        y = apply_normal(x)
        size = float(np.linalg.norm(y))
        if size == 0.0:
            return 0.0
        estimate = float(np.dot(x, y))
        x = y / size
    return max(estimate, float(np.dot(x, apply_normal(x))))


def estimate_operator_norm(
    L: LinearOperatorHandle,
    iterations: Optional[int] = None,
    norm_kind: Union[NormKind, str] = NormKind.DISCRETE_L2,
    seed: Optional[int] = None,
) -> float:
    """``||L||`` in the given norm; power iteration on ``L^T L`` for the L2 case."""
    iterations = settings.power_iterations if iterations is None else iterations
    if iterations < 10:
        raise InvalidArgumentError("power iteration needs at least 10 iterations")
    if NormKind(norm_kind) is NormKind.SUP:
        if L.dense is None:
            raise UnsupportedOperationError("sup operator norm needs a dense realization")
        return sup_norm_of_matrix(L.dense)
    seed = settings.seed if seed is None else seed
    lam = power_iteration(
        lambda x: L.apply_transpose(L.apply(x)), L.dimension, iterations, seed
    )
    return float(np.sqrt(max(lam, 0.0)))


def estimate_inverse_norm(
    L: LinearOperatorHandle,
    opts: Optional[SolveOptions] = None,
    norm_kind: Union[NormKind, str] = NormKind.DISCRETE_L2,
    iterations: Optional[int] = None,
    seed: Optional[int] = None,
) -> float:
    """``||L^{-1}||`` by dense SVD (inverse row sums for sup) or inverse power iteration."""
    kind = NormKind(norm_kind)
    if L.dense is not None or L.dimension <= settings.dense_limit:
        matrix = materialize(L)
        if kind is NormKind.SUP:
            lu, piv = factorize(matrix)
            inverse = lu_solve((lu, piv), np.eye(L.dimension), check_finite=False)
            return sup_norm_of_matrix(inverse)
        sigma = svdvals(matrix)
        if sigma[0] == 0.0 or sigma[-1] <= SINGULAR_RATIO * sigma[0]:
            raise SingularOperatorError(
                f"smallest singular value {sigma[-1]:.3e} relative to {sigma[0]:.3e}"
            )
        return float(1.0 / sigma[-1])

    if kind is NormKind.SUP:
        raise UnsupportedOperationError("sup inverse norm needs a dense realization")
    opts = opts or SolveOptions()
    iterations = settings.power_iterations if iterations is None else iterations
    seed = settings.seed if seed is None else seed
    transpose = LinearOperatorHandle(
        dimension=L.dimension, matvec=L.apply_transpose, rmatvec=L.apply
    )
    logger.debug("inverse power iteration on dimension %d", L.dimension)
    lam = power_iteration(
        lambda x: solve_array(L, solve_array(transpose, x, opts), opts),
        L.dimension,
        iterations,
        seed,
    )
    return float(np.sqrt(max(lam, 0.0)))
