"""Deterministic sampling of states in a ball ``B_R``."""

from typing import Iterator, List, Optional, Tuple, Union

import numpy as np

from config.settings import settings
from core.mesh import Mesh, NormKind
from core.state import norm_of_array

RADIUS_FRACTIONS = (1.0, 0.75, 0.5, 0.25)


def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    return np.random.default_rng(settings.seed if seed is None else seed)


def unit_direction(mesh: Mesh, norm_kind: Union[NormKind, str], rng) -> np.ndarray:
    """Gaussian direction scaled to unit norm."""
    while True:
        direction = rng.standard_normal(mesh.size)
        size = norm_of_array(direction, norm_kind, mesh.cell_volume)
        if size > 0.0:
            return direction / size


def sample_ball(
    mesh: Mesh,
    norm_kind: Union[NormKind, str],
    R: float,
    n: int,
    rng: np.random.Generator,
) -> List[np.ndarray]:
    """``n`` states whose norms cycle through ``R, 3R/4, R/2, R/4``."""
    samples = []
    for index in range(n):
        radius = R * RADIUS_FRACTIONS[index % len(RADIUS_FRACTIONS)]
        samples.append(radius * unit_direction(mesh, norm_kind, rng))
    return samples


def sample_pairs(
    mesh: Mesh,
    norm_kind: Union[NormKind, str],
    R: float,
    n_pairs: int,
    rng: np.random.Generator,
    max_redraws: int = 100,
) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Pairs in ``B_R`` separated by more than ``1e-12 * max(1, R)``."""
    floor = 1e-12 * max(1.0, R)
    for index in range(n_pairs):
        for _ in range(max_redraws):
            u, v = sample_ball(mesh, norm_kind, R, 2, rng)
            scale = RADIUS_FRACTIONS[index % len(RADIUS_FRACTIONS)]
            u, v = scale * u, scale * v
            if norm_of_array(u - v, norm_kind, mesh.cell_volume) > floor:
                yield u, v
                break
