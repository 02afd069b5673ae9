"""
Tests for the certificate constants p, s, q and the assembled verdicts.
"""

import math

import numpy as np
import pytest

from conftest import cubic_spec
from core.errors import InvalidArgumentError, SingularOperatorError
from core.mesh import NormKind
from core.operators import LinearOperatorHandle
from core.state import StateVector, norm
from certify.certificate import certify_invertibility, certify_problem, check_contraction_hypotheses
from certify.constants import (
    estimate_lipschitz_q,
    estimate_p,
    estimate_q_by_derivative,
    estimate_s,
)
from certify.sampling import make_rng, sample_ball, sample_pairs
from linearizer.build import build_L
from linsolve.norms import estimate_inverse_norm
from problems import (
    IntegralProblemSpec,
    LinearProblem,
    PointwiseCubicProblem,
    make_elliptic_problem,
    make_integral_problem,
    manufacture_rhs,
)
from solvers.diagnostics import empirical_contraction
from solvers.global_linearization import run_iteration

SEED = 1234


@pytest.fixture
def small_cubic():
    return make_elliptic_problem(cubic_spec(a=1.0, n=16))


@pytest.mark.unit
class TestSampling:
    def test_radii_cycle(self, small_cubic):
        samples = sample_ball(small_cubic.mesh, small_cubic.norm_kind, 2.0, 8, make_rng(SEED))
        norms = [small_cubic.norm_of(u) for u in samples]
        np.testing.assert_allclose(norms, [2.0, 1.5, 1.0, 0.5] * 2)

    def test_same_seed_same_samples(self, small_cubic):
        first = sample_ball(small_cubic.mesh, small_cubic.norm_kind, 1.0, 3, make_rng(SEED))
        second = sample_ball(small_cubic.mesh, small_cubic.norm_kind, 1.0, 3, make_rng(SEED))
        for a, b in zip(first, second):
            np.testing.assert_array_equal(a, b)

    def test_pairs_stay_in_ball(self, small_cubic):
        pairs = list(
            sample_pairs(small_cubic.mesh, small_cubic.norm_kind, 1.0, 6, make_rng(SEED))
        )
        assert len(pairs) == 6
        for u, v in pairs:
            assert small_cubic.norm_of(u) <= 1.0 + 1e-12
            assert small_cubic.norm_of(u - v) > 0.0


@pytest.mark.unit
class TestConstants:
    def test_p_of_scaled_identity(self, three_nodes):
        problem = LinearProblem(2.0 * np.eye(3), three_nodes)
        assert estimate_p(problem) == pytest.approx(0.5)

    def test_p_of_shifted_laplacian(self, small_cubic):
        h = small_cubic.mesh.spacings[0]
        smallest = 4.0 / h**2 * np.sin(np.pi * h / 2.0) ** 2
        assert estimate_p(small_cubic) == pytest.approx(1.0 / (smallest + 1.0), rel=1e-10)

    def test_p_of_integral_with_flat_nonlinearity(self):
        problem = make_integral_problem(
            IntegralProblemSpec(
                kernel=lambda x, y: np.exp(x * y), g=lambda u: u**2, g_prime=lambda u: 2.0 * u
            )
        )
        assert estimate_p(problem) == pytest.approx(1.0)

    def test_p_singular_at_zero(self):
        with pytest.raises(SingularOperatorError):
            estimate_p(PointwiseCubicProblem())

    def test_s_vanishes_for_linear(self, three_nodes):
        problem = LinearProblem(2.0 * np.eye(3), three_nodes)
        assert estimate_s(problem, 5.0, n_samples=4) == 0.0

    def test_s_at_zero_radius(self, small_cubic):
        assert estimate_s(small_cubic, 0.0) == 0.0

    def test_s_matches_diagonal_perturbation(self, small_cubic):
        R = 0.5
        samples = sample_ball(small_cubic.mesh, small_cubic.norm_kind, R, 8, make_rng(SEED))
        expected = max(3.0 * np.max(u**2) for u in samples)
        assert estimate_s(small_cubic, R, n_samples=8, seed=SEED) == pytest.approx(
            expected, rel=1e-12
        )

    def test_s_grows_with_radius(self, small_cubic):
        inner = estimate_s(small_cubic, 0.5, n_samples=8, seed=SEED)
        outer = estimate_s(small_cubic, 1.0, n_samples=8, seed=SEED)
        assert inner <= outer

    def test_s_rejects_bad_arguments(self, small_cubic):
        with pytest.raises(InvalidArgumentError):
            estimate_s(small_cubic, -1.0)
        with pytest.raises(InvalidArgumentError):
            estimate_s(small_cubic, 1.0, n_t=1)

    def test_q_vanishes_for_linear(self, three_nodes):
        problem = LinearProblem(2.0 * np.eye(3), three_nodes)
        assert estimate_lipschitz_q(problem, 1.0, n_pairs=4, seed=SEED) == 0.0

    def test_q_within_reaction_bound(self):
        a, eps, R = 2.0, 0.1, 1.0
        problem = make_elliptic_problem(cubic_spec(a=a, n=16, eps=eps))
        pairs = sample_pairs(problem.mesh, problem.norm_kind, R, 10, make_rng(SEED))
        lipschitz = max(
            np.max(np.abs(eps * (v**2 - u**2))) / problem.norm_of(u - v) for u, v in pairs
        )
        q = estimate_lipschitz_q(problem, R, n_pairs=10, seed=SEED)
        assert 0.0 < q <= lipschitz / a**2 + 1e-6

    def test_q_by_derivative_is_finite(self, small_cubic):
        value = estimate_q_by_derivative(small_cubic, 0.5, n_samples=3, seed=SEED)
        assert math.isfinite(value) and value > 0.0


@pytest.mark.unit
class TestVerdicts:
    @pytest.mark.parametrize(
        "p, s, holds, bound",
        [(0.5, 1.0, True, 1.0), (1.0, 1.0, False, math.inf), (2.0, 0.0, True, 2.0)],
    )
    def test_invertibility(self, p, s, holds, bound):
        verdict = certify_invertibility(p, s)
        assert verdict.holds is holds
        assert verdict.inverse_bound == pytest.approx(bound)

    def test_invertibility_rejects_negative(self):
        with pytest.raises(InvalidArgumentError):
            certify_invertibility(-1.0, 0.0)

    def test_contraction_with_constant_linearization(self, three_nodes):
        f = StateVector([2.0, 2.0, 2.0], three_nodes, NormKind.DISCRETE_L2)
        u0 = StateVector.zeros(three_nodes, NormKind.DISCRETE_L2)
        L0 = LinearOperatorHandle.from_matrix(2.0 * np.eye(3))
        certificate = check_contraction_hypotheses(0.0, f, u0, L0, 2.0)
        assert certificate.Q == 0.0
        assert certificate.S_radius == pytest.approx(math.sqrt(1.5))
        assert certificate.contraction_holds

        failing = check_contraction_hypotheses(1.2 / norm(f), f, u0, L0, 2.0)
        assert failing.Q == pytest.approx(1.2)
        assert failing.S_radius == math.inf
        assert not failing.contraction_holds

    def test_contraction_rejects_bad_radius(self, three_nodes):
        f = StateVector([1.0, 1.0, 1.0], three_nodes)
        L0 = LinearOperatorHandle.from_matrix(np.eye(3))
        with pytest.raises(InvalidArgumentError):
            check_contraction_hypotheses(0.1, f, f, L0, 0.0)


@pytest.mark.integration
class TestCertifiedRuns:
    def test_certified_instance_converges(self, small_cubic):
        exact = StateVector.from_function(
            small_cubic.mesh, lambda x: 0.1 * np.sin(np.pi * x), small_cubic.norm_kind
        )
        f = manufacture_rhs(small_cubic, exact)
        u0 = small_cubic.zero_state()
        certificate = certify_problem(small_cubic, f, u0, R=0.2, seed=SEED)
        assert certificate.invertibility_holds
        assert certificate.contraction_holds
        assert certificate.holds
        assert certificate.sample_count == 20 * 4 + 10
        assert certificate.tags["p"] == "exact"
        assert not certificate.mixed_norms

        report = run_iteration(small_cubic, f, u0)
        assert report.converged
        assert all(value <= certificate.S_radius + 1e-12 for value in report.iterate_norms)
        if len(report.step_norms) >= 3:
            assert empirical_contraction(report) <= certificate.Q + 0.1

    def test_inverse_bound_dominates_sampled_linearizations(self, small_cubic):
        R = 0.2
        verdict = certify_invertibility(
            estimate_p(small_cubic), estimate_s(small_cubic, R, n_samples=8, seed=SEED)
        )
        assert verdict.holds
        states = sample_ball(small_cubic.mesh, small_cubic.norm_kind, R, 8, make_rng(SEED + 1))
        for u in states:
            L = build_L(small_cubic, small_cubic.state(u))
            inverse_norm = estimate_inverse_norm(L, norm_kind=small_cubic.norm_kind)
            assert inverse_norm <= verdict.inverse_bound * (1.0 + 1e-9)

    def test_large_ball_fails_invertibility(self, small_cubic):
        f = small_cubic.state(np.ones(small_cubic.size))
        certificate = certify_problem(
            small_cubic, f, small_cubic.zero_state(), R=5.0, samples=8, pairs=4, seed=SEED
        )
        assert not certificate.invertibility_holds
        assert not certificate.holds

    def test_parabolic_certificate_is_flagged(self, parabolic_quadratic):
        f = parabolic_quadratic.right_hand_side()
        certificate = certify_problem(
            parabolic_quadratic,
            f,
            parabolic_quadratic.zero_state(),
            R=0.5,
            samples=4,
            pairs=3,
            seed=SEED,
        )
        assert certificate.mixed_norms
        assert certificate.to_dict()["mixed_norms"] is True
