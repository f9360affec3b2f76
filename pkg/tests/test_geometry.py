"""Charts, metrics, level-set momenta and the difference-quotient curvature."""

import math

import numpy as np
import pytest

from magflows.errors import DomainError, SingularMetric
from magflows.geometry import (
    ChartDomain,
    MagneticSystem,
    Metric,
    conformal_metric,
    gaussian_curvature,
    hamiltonian,
    momentum_on_level,
)

RNG = np.random.default_rng(0)


def _euclidean():
    return Metric(components=lambda x, y: (1.0, 0.0, 1.0),
                  partials=lambda x, y: ((0.0, 0.0), (0.0, 0.0), (0.0, 0.0)))


def _euclidean_system(energy=1.0):
    domain = ChartDomain(bbox=(-5.0, 5.0, -5.0, 5.0))
    return MagneticSystem(metric=_euclidean(), field=lambda x, y: 0.0,
                          domain=domain, energy=energy, name="free")


class TestChartDomain:
    def test_contains_follows_predicate(self):
        """Membership is the predicate, not the sampling box."""
        domain = ChartDomain(bbox=(0.0, 1.0, 0.0, 1.0),
                             predicate=lambda x, y: x + y < 10.0)
        assert domain.contains(3.0, 4.0)
        assert not domain.contains(8.0, 8.0)

    def test_contains_rejects_non_finite(self):
        """NaN or infinite coordinates are never inside."""
        domain = ChartDomain(bbox=(0.0, 1.0, 0.0, 1.0))
        assert not domain.contains(float("nan"), 0.5)
        assert not domain.contains(float("inf"), 0.5)

    def test_grid_respects_predicate_and_margin(self):
        """Grid points stay inside the box and pass the predicate."""
        domain = ChartDomain(bbox=(0.0, 2.0, 0.0, 2.0),
                             predicate=lambda x, y: x > 1.0)
        points = domain.grid(10, 10, margin=0.05)
        assert len(points) > 0
        for x, y in points:
            assert 0.0 < x < 2.0 and 0.0 < y < 2.0
            assert x > 1.0


class TestMetric:
    def test_matrix_and_determinant(self):
        """Components map straight into the 2x2 matrix."""
        metric = Metric(components=lambda x, y: (2.0, 0.5, 3.0))
        mat = metric.matrix(0.0, 0.0)
        np.testing.assert_allclose(mat, [[2.0, 0.5], [0.5, 3.0]])
        np.testing.assert_allclose(metric.det(0.0, 0.0), 5.75)

    def test_inverse(self):
        """matrix @ inverse = identity."""
        metric = Metric(components=lambda x, y: (2.0, 0.5, 3.0))
        product = metric.matrix(1.0, 2.0) @ metric.inverse(1.0, 2.0)
        np.testing.assert_allclose(product, np.eye(2), atol=1e-14)

    def test_cholesky_reconstructs(self):
        """L L^T recovers the matrix for a positive definite metric."""
        metric = Metric(components=lambda x, y: (2.0 + x * x, 0.3, 1.5))
        low = metric.cholesky(0.7, -0.2)
        np.testing.assert_allclose(low @ low.T, metric.matrix(0.7, -0.2), atol=1e-14)

    def test_singular_rejected(self):
        """A non-positive-definite point raises SingularMetric."""
        metric = Metric(components=lambda x, y: (1.0, 2.0, 1.0))
        with pytest.raises(SingularMetric):
            metric.check_positive_definite(0.0, 0.0)
        with pytest.raises(SingularMetric):
            metric.cholesky(0.0, 0.0)

    def test_fd_partials_match_analytic(self):
        """Default difference-quotient partials track supplied ones."""
        analytic = Metric(
            components=lambda x, y: (1.0 + x * x, x * y, 2.0 + y * y),
            partials=lambda x, y: ((2.0 * x, y, 0.0), (0.0, x, 2.0 * y)),
        )
        plain = Metric(components=analytic.components)
        got = np.asarray(plain.component_partials(0.6, -1.1))
        want = np.asarray(analytic.component_partials(0.6, -1.1))
        np.testing.assert_allclose(got, want, atol=1e-9)


class TestConformalMetric:
    def test_components(self):
        """conformal_metric(f) gives (f, 0, f)."""
        metric = conformal_metric(lambda x, y: 2.0 + math.cos(y))
        g11, g12, g22 = metric.components(0.3, 0.9)
        np.testing.assert_allclose(g11, 2.0 + math.cos(0.9), rtol=1e-15)
        assert g12 == 0.0
        np.testing.assert_allclose(g22, g11, rtol=0)


class TestHamiltonian:
    def test_euclidean_value(self):
        """H = |p|^2 / 2 on the flat plane."""
        system = _euclidean_system()
        np.testing.assert_allclose(
            hamiltonian(system, (0.0, 0.0, 0.6, 0.8)), 0.5, rtol=1e-15
        )

    def test_domain_check_toggle(self):
        """check_domain=False evaluates outside the predicate."""
        domain = ChartDomain(bbox=(0.0, 1.0, 0.0, 1.0), predicate=lambda x, y: x < 1.0)
        system = MagneticSystem(metric=_euclidean(), field=lambda x, y: 0.0,
                                domain=domain, energy=1.0, name="half")
        with pytest.raises(DomainError):
            hamiltonian(system, (2.0, 0.0, 1.0, 0.0))
        value = hamiltonian(system, (2.0, 0.0, 1.0, 0.0), check_domain=False)
        np.testing.assert_allclose(value, 0.5, rtol=1e-15)


class TestMomentumOnLevel:
    def test_hits_half_energy_for_any_angle(self):
        """H equals C/2 identically in the angle."""
        metric = Metric(components=lambda x, y: (2.0 + x * x, 0.4, 1.0 + y * y))
        domain = ChartDomain(bbox=(-2.0, 2.0, -2.0, 2.0))
        system = MagneticSystem(metric=metric, field=lambda x, y: 1.0,
                                domain=domain, energy=3.0, name="bumpy")
        for phi in RNG.uniform(0.0, 2.0 * math.pi, size=25):
            p1, p2 = momentum_on_level(system, 0.7, -0.4, phi)
            h = hamiltonian(system, (0.7, -0.4, p1, p2))
            np.testing.assert_allclose(h, 1.5, rtol=1e-13)

    def test_energy_override(self):
        """The optional energy argument moves the level."""
        system = _euclidean_system()
        p1, p2 = momentum_on_level(system, 0.0, 0.0, 0.3, energy=2.0)
        np.testing.assert_allclose(p1 * p1 + p2 * p2, 2.0, rtol=1e-13)

    def test_rejects_bad_energy(self):
        """Zero or negative level constants are refused."""
        system = _euclidean_system()
        with pytest.raises(DomainError):
            momentum_on_level(system, 0.0, 0.0, 0.0, energy=0.0)


class TestGaussianCurvature:
    def test_flat_plane(self):
        """The Euclidean metric has exactly zero curvature."""
        assert gaussian_curvature(_euclidean(), 0.3, -0.8, h=1e-4) == 0.0

    def test_conformal_oracle(self):
        """K = (1 - y^2)/(1 + y^2) for the factor 1/(1 + y^2)."""
        metric = conformal_metric(lambda x, y: 1.0 / (1.0 + y * y))
        for y in (0.0, 0.4, -0.9, 1.7):
            want = (1.0 - y * y) / (1.0 + y * y)
            got = gaussian_curvature(metric, 0.2, y, h=1e-4)
            np.testing.assert_allclose(got, want, atol=1e-7)

    def test_sphere_patch(self):
        """The stereographic round-sphere factor gives K = 1."""
        metric = conformal_metric(lambda x, y: 4.0 / (1.0 + x * x + y * y) ** 2)
        got = gaussian_curvature(metric, 0.3, -0.5, h=1e-4)
        np.testing.assert_allclose(got, 1.0, atol=1e-7)

    def test_stable_under_halving(self):
        """Halving the stencil step moves the value only slightly."""
        metric = conformal_metric(lambda x, y: 2.0 + math.cos(y))
        k1 = gaussian_curvature(metric, 0.0, 0.7, h=1e-4)
        k2 = gaussian_curvature(metric, 0.0, 0.7, h=5e-5)
        assert abs(k1 - k2) < 1e-6 * max(1.0, abs(k1))
