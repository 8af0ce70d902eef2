import numpy as np
import pytest

from bernstein_lab import quadrature as quad


class TestPeriodicDoubling:
    def test_smooth_periodic_integral(self):
        # (1/2pi) int exp(cos t) dt = I_0(1), the modified Bessel value
        from scipy.special import iv

        raw, val, err, nodes = quad.periodic_mean_doubling(
            lambda t: np.exp(np.cos(t)), 16, 1 << 16, 1e-12
        )
        assert val == pytest.approx(float(iv(0, 1.0)), rel=1e-12)
        assert nodes <= 256

    def test_reports_last_delta(self):
        _, _, err, _ = quad.periodic_mean_doubling(np.cos, 16, 1 << 10, 1e-15)
        assert err >= 0.0


class TestGradedPanels:
    def test_log_singularity_at_endpoint(self):
        # int_0^1 log(x) dx = -1
        edges = quad.graded_edges(0.0, 1.0, True, False, max_width=0.5)
        value = quad.integrate_edges(lambda x: np.log(x), edges)
        assert value == pytest.approx(-1.0, abs=1e-12)

    def test_both_ends_singular(self):
        # int_0^1 log(x(1-x)) dx = -2
        edges = quad.graded_edges(0.0, 1.0, True, True, max_width=0.5)
        value = quad.integrate_edges(lambda x: np.log(x * (1.0 - x)), edges)
        assert value == pytest.approx(-2.0, abs=1e-12)

    def test_width_cap(self):
        edges = quad.graded_edges(0.0, 4.0, False, False, max_width=0.5)
        assert np.max(np.diff(edges)) <= 0.5 + 1e-15


class TestAdaptiveGL:
    def test_kinked_integrand(self):
        # int_{-1}^{1} |x| dx = 1, kink off any panel boundary
        value, err = quad.adaptive_gl(np.abs, -1.0, 1.0, 1e-12)
        assert value == pytest.approx(1.0, abs=1e-10)

    def test_smooth_is_cheap_and_exact(self):
        value, _ = quad.adaptive_gl(np.sin, 0.0, np.pi, 1e-12)
        assert value == pytest.approx(2.0, rel=1e-13)


class TestSingularCircleMean:
    def test_geometric_mean_of_distance_to_one(self):
        # (1/2pi) int log|e^{it} - 1| dt = 0: the circle's own log-potential
        value, err = quad.singular_circle_mean(
            lambda t: np.log(np.abs(np.exp(1j * t) - 1.0)), np.array([0.0]), 2
        )
        assert value == pytest.approx(0.0, abs=1e-12)

    def test_shifted_singularity(self):
        a = 0.7
        value, _ = quad.singular_circle_mean(
            lambda t: np.log(np.abs(np.exp(1j * t) - np.exp(1j * a))), np.array([a]), 2
        )
        assert value == pytest.approx(0.0, abs=1e-12)


class TestBisect:
    def test_finds_crossings(self):
        f = lambda x: np.sin(x)
        out = quad.bisect_roots(f, np.array([3.0]), np.array([3.3]))
        assert out[0] == pytest.approx(np.pi, abs=1e-12)
