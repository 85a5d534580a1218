"""Model-agnostic exponential-family operations against independent oracles.

Single-variable closed forms are probed through a 2-spin model whose second
spin is left free (theta = (t, 0, 0)): psi, moments and entropies then
decompose as the single-spin value plus the free spin's log 2.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entroflow import core
from entroflow.models import GaussianOscillatorModel, build_pairwise

LOG2 = math.log(2.0)


def embedded_single_spin(t):
    """(model, theta) for one ising spin with bias t plus one free spin."""
    model = build_pairwise(2, "ising")
    return model, np.array([t, 0.0, 0.0])


class TestLogPartition:
    def test_uniform_single_spin(self):
        model, theta = embedded_single_spin(0.0)
        assert core.log_partition(model, theta) == pytest.approx(2 * LOG2, abs=1e-12)

    def test_biased_single_spin_closed_form(self):
        # psi_1(t) = log(2 cosh t); the free spin adds log 2
        model, theta = embedded_single_spin(0.5)
        expected = math.log(2.0 * math.cosh(0.5)) + LOG2
        assert core.log_partition(model, theta) == pytest.approx(expected, abs=1e-12)
        assert math.log(2.0 * math.cosh(0.5)) == pytest.approx(0.813262, abs=1e-6)

    def test_gaussian_identity_precision(self):
        model = GaussianOscillatorModel()
        psi = core.log_partition(model, [1.0, 1.0, 0.0])
        assert psi == pytest.approx(math.log(2.0 * math.pi), abs=1e-12)
        assert psi == pytest.approx(1.837877, abs=1e-6)

    def test_no_overflow_at_large_theta(self):
        model = build_pairwise(3, "ising")
        theta = np.full(model.dim, 50.0 / math.sqrt(model.dim))
        assert math.isfinite(core.log_partition(model, theta))

    def test_dimension_mismatch_rejected(self):
        model = build_pairwise(2, "ising")
        with pytest.raises(core.InvalidParamsError):
            core.log_partition(model, [0.1, 0.2])

    def test_non_finite_rejected(self):
        model = build_pairwise(2, "ising")
        with pytest.raises(core.InvalidParamsError):
            core.log_partition(model, [0.1, math.nan, 0.0])


class TestMoments:
    def test_mean_at_symmetry_is_zero(self):
        model, theta = embedded_single_spin(0.0)
        assert np.abs(core.mean_parameters(model, theta)).max() < 1e-14

    def test_mean_closed_form(self):
        model, theta = embedded_single_spin(0.5)
        mu = core.mean_parameters(model, theta)
        assert mu[0] == pytest.approx(math.tanh(0.5), abs=1e-12)
        assert mu[0] == pytest.approx(0.462117, abs=1e-6)

    def test_mean_matches_enumeration(self, rng):
        model = build_pairwise(4, "binary01")
        theta = 0.6 * rng.standard_normal(model.dim)
        _, p = model._distribution(theta)
        brute = p @ model.suff_stats
        assert np.abs(core.mean_parameters(model, theta) - brute).max() < 1e-10

    def test_fisher_single_spin(self):
        model, theta0 = embedded_single_spin(0.0)
        assert core.fisher_information(model, theta0)[0, 0] == pytest.approx(1.0, abs=1e-12)
        _, theta = embedded_single_spin(0.5)
        g = core.fisher_information(model, theta)[0, 0]
        assert g == pytest.approx(1.0 / math.cosh(0.5) ** 2, abs=1e-12)
        assert g == pytest.approx(0.786448, abs=1e-6)

    def test_fisher_matches_fd_of_mean(self, rng):
        from entroflow.numdiff import central_jacobian
        for conv in ("ising", "binary01"):
            model = build_pairwise(3, conv)
            theta = 0.5 * rng.standard_normal(model.dim)
            G = core.fisher_information(model, theta)
            G_fd = central_jacobian(lambda t: model.mean_parameters(t), theta)
            scale = 1.0 + np.abs(G).max()
            assert np.abs(G - G_fd).max() / scale < 1e-6


class TestThirdCumulant:
    def test_zero_vector_gives_zero(self, pairwise01):
        out = core.third_cumulant_contraction(
            pairwise01, np.zeros(6), np.zeros(6))
        assert np.all(out == 0.0)

    def test_symmetric_point_vanishes(self):
        # the single-spin statistic has odd third moment E[x^3] = 0 at uniform;
        # only that entry is probed because the pair statistic x1 x2 of the
        # embedding forms even products with nonzero expectation
        model, theta = embedded_single_spin(0.0)
        out = core.third_cumulant_contraction(model, theta, np.array([1.0, 0.0, 0.0]))
        assert abs(out[0, 0]) < 1e-14

    def test_matches_enumerated_third_central_moment(self, rng):
        model = build_pairwise(3, "binary01")
        theta = 0.4 * rng.standard_normal(model.dim)
        v = rng.standard_normal(model.dim)
        _, p = model._distribution(theta)
        Tc = model.suff_stats - p @ model.suff_stats
        tensor = np.einsum("x,xi,xj,xk->ijk", p, Tc, Tc, Tc)
        expected = tensor @ v
        got = core.third_cumulant_contraction(model, theta, v)
        assert np.abs(got - expected).max() < 1e-8
        assert np.abs(got - got.T).max() < 1e-14


class TestEntropies:
    def test_uniform_joint_entropy(self):
        model = build_pairwise(3, "ising")
        assert core.joint_entropy(model, np.zeros(6)) == pytest.approx(3 * LOG2, abs=1e-12)

    def test_single_spin_joint_entropy(self):
        model, theta = embedded_single_spin(0.5)
        h1 = math.log(2 * math.cosh(0.5)) - 0.5 * math.tanh(0.5)
        assert h1 == pytest.approx(0.582203, abs=1e-6)
        assert core.joint_entropy(model, theta) == pytest.approx(h1 + LOG2, abs=1e-12)

    def test_gaussian_joint_entropy(self):
        model = GaussianOscillatorModel()
        H = core.joint_entropy(model, [1.0, 1.0, 0.0])
        assert H == pytest.approx(math.log(2 * math.pi) + 1.0, abs=1e-12)
        assert H == pytest.approx(2.837877, abs=1e-6)

    def test_entropy_gradient_is_minus_G_theta(self):
        model, theta = embedded_single_spin(0.5)
        grad = core.entropy_gradient(model, theta)
        assert grad[0] == pytest.approx(-0.5 / math.cosh(0.5) ** 2, abs=1e-12)
        assert grad[0] == pytest.approx(-0.393224, abs=1e-6)

    def test_entropy_gradient_matches_fd(self, rng):
        from entroflow.numdiff import central_gradient
        model = build_pairwise(3, "ising")
        theta = 0.5 * rng.standard_normal(model.dim)
        grad = core.entropy_gradient(model, theta)
        fd = central_gradient(
            lambda t: float(model.log_partition(t) - t @ model.mean_parameters(t)), theta)
        assert np.abs(grad - fd).max() / (1.0 + np.abs(grad).max()) < 1e-6

    def test_marginal_entropies_uniform(self):
        model = build_pairwise(3, "ising")
        assert np.abs(core.marginal_entropies(model, np.zeros(6)) - LOG2).max() < 1e-14

    def test_gaussian_marginal_entropies(self):
        model = GaussianOscillatorModel()
        hs = core.marginal_entropies(model, [1.0, 1.0, 0.0])
        expected = 0.5 * math.log(2 * math.pi * math.e)
        assert np.abs(hs - expected).max() < 1e-12
        assert expected == pytest.approx(1.418939, abs=1e-6)

    def test_marginals_match_enumeration(self, pairwise01, rng):
        theta = 0.5 * rng.standard_normal(6)
        _, p = pairwise01._distribution(theta)
        for i in range(3):
            q = p[pairwise01.states[:, i] == 1.0].sum()
            expected = -(q * math.log(q) + (1 - q) * math.log(1 - q))
            assert core.marginal_entropies(pairwise01, theta)[i] == pytest.approx(
                expected, abs=1e-12)

    def test_marginals_bounded_by_log_cardinality(self, pairwise01, rng):
        for _ in range(5):
            theta = rng.standard_normal(6)
            hs = core.marginal_entropies(pairwise01, theta)
            assert np.all(hs <= math.log(pairwise01.marginal_cardinality()) + 1e-12)


class TestConstraintGradient:
    def test_zero_at_symmetric_point(self):
        # uniform marginals sit at the top of each binary entropy
        model = build_pairwise(3, "ising")
        a = core.constraint_gradient(model, np.zeros(6))
        assert np.abs(a).max() < 1e-12

    def test_gaussian_isotropic_cross_component_vanishes(self):
        model = GaussianOscillatorModel()
        a = core.constraint_gradient(model, [1.0, 1.0, 0.0])
        assert a[2] == 0.0

    def test_fd_richardson_vs_single_step(self, pairwise01):
        theta = np.array([0.2, -0.1, 0.3, 0.25, -0.15, 0.1])
        plain = core.constraint_gradient(pairwise01, theta, force_fd=True, richardson=False)
        extrap = core.constraint_gradient(pairwise01, theta, force_fd=True, richardson=True)
        assert np.abs(plain - extrap).max() < 1e-7

    def test_analytic_matches_fd(self, pairwise01, cw_small, gaussian):
        cases = [
            (pairwise01, np.array([0.2, -0.1, 0.3, 0.25, -0.15, 0.1])),
            (cw_small, np.array([0.12, 0.85])),
            (gaussian, np.array([1.0, 0.7, 0.2])),
        ]
        for model, theta in cases:
            analytic = core.constraint_gradient(model, theta)
            fd = core.constraint_gradient(model, theta, force_fd=True)
            assert np.abs(analytic - fd).max() < 1e-8


class TestMultiInformation:
    def test_product_distribution_is_zero(self):
        model = build_pairwise(3, "binary01")
        theta = np.array([0.4, -0.2, 0.7, 0.0, 0.0, 0.0])
        assert core.multi_information(model, theta) == 0.0

    def test_gaussian_correlation_closed_form(self):
        model = GaussianOscillatorModel()
        theta = np.array([1.0, 0.8, 0.3])
        rho = -theta[2] / math.sqrt(theta[0] * theta[1])
        expected = -0.5 * math.log(1.0 - rho * rho)
        assert core.multi_information(model, theta) == pytest.approx(expected, abs=1e-10)

    def test_frustrated_point_is_positive(self, pairwise01):
        from entroflow.models import frustrated_theta
        assert core.multi_information(pairwise01, frustrated_theta()) > 0.0

    def test_entropy_report_consistency(self, pairwise01, rng):
        theta = 0.5 * rng.standard_normal(6)
        rep = core.entropy_report(pairwise01, theta)
        assert rep.multi_information == pytest.approx(
            rep.constraint_value - rep.joint, abs=1e-14)
        assert rep.multi_information >= 0.0
        assert len(rep.marginals) == 3


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-2.0, 2.0), min_size=6, max_size=6))
def test_multi_information_nonnegative_property(theta):
    model = build_pairwise(3, "binary01")
    assert core.multi_information(model, np.array(theta)) >= 0.0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-2.0, 2.0), min_size=6, max_size=6))
def test_fisher_psd_property(theta):
    model = build_pairwise(3, "ising")
    G = core.fisher_information(model, np.array(theta))
    assert np.linalg.eigvalsh(G).min() >= -1e-10 * max(np.linalg.norm(G), 1e-30)
