import json
import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path to allow importing the packages without installing
sys.path.insert(0, str(Path(__file__).parent.parent))

from core.mesh import Mesh  # noqa: E402
from problems import (  # noqa: E402
    EllipticProblemSpec,
    IntegralProblemSpec,
    ParabolicProblemSpec,
    make_elliptic_problem,
    make_integral_problem,
    make_parabolic_problem,
)


def cubic_spec(a: float = 1.0, n: int = 32, eps: float = 1.0, dimension: int = 1):
    """``g(x, u) = a u + eps u^3`` with the split constant ``a`` declared."""
    return EllipticProblemSpec(
        g=lambda x, u: a * u + eps * u**3,
        g_u=lambda x, u: a + 3.0 * eps * u**2,
        split_a=a,
        n=n,
        dimension=dimension,
    )


@pytest.fixture
def elliptic_cubic():
    """-u'' + u + u^3 on 32 interior nodes."""
    return make_elliptic_problem(cubic_spec(a=1.0, n=32))


@pytest.fixture
def integral_sine():
    """u + int 0.2 exp(-|x - y|) sin(u(y)) dy on 21 Nyström nodes."""
    spec = IntegralProblemSpec(
        kernel=lambda x, y: 0.2 * np.exp(-np.abs(x - y)),
        g=np.sin,
        g_prime=np.cos,
        n_nodes=21,
        symmetric=True,
    )
    return make_integral_problem(spec)


@pytest.fixture
def parabolic_quadratic():
    """Heat equation with a(u) = 1 + u^2 on an 8 x 8 space-time grid."""
    spec = ParabolicProblemSpec(
        a=lambda u: 1.0 + u**2,
        a_prime=lambda u: 2.0 * u,
        a_second=lambda u: np.full_like(u, 2.0),
        u_initial=lambda x: 0.5 * np.sin(np.pi * x),
        bounds=(0.5, 2.0),
        n_x=8,
        n_t=8,
    )
    return make_parabolic_problem(spec)


@pytest.fixture
def three_nodes():
    return Mesh.closed_interval(0.0, 1.0, 3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def write_config(tmp_path):
    """Write a run configuration and return its path."""

    def _write(payload, name="config.json"):
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return path

    return _write
