import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad
from scipy.special import gammaln

from fockproj import dynamics, fock, phase_space
from fockproj.errors import DimensionError, EigenvalueRangeError, FockError, NotHermitianError
from fockproj.projector import (
    Circle, Ellipse, GeneralRegion, NonConfiningWarning, displaced_projector,
    elliptical_projector, exact_projector, general_region_projector, lambda_profile,
    quasi_projector, rank_for_radius, region_projector, round_to_projector,
)

QUARTIC = dynamics.Potential.polynomial([0, 0, 0, 0, 0.25])


def lambda_by_quadrature(n, R):
    """(2 / n!) int_0^R r^{2n+1} e^{-r^2} dr by adaptive quadrature."""
    def f(r):
        if r == 0.0:
            return 0.0
        return 2.0 * math.exp((2 * n + 1) * math.log(r) - r * r - gammaln(n + 1))
    peak = math.sqrt(n + 0.5)
    pts = [peak] if 0 < peak < R else None
    val, _ = quad(f, 0.0, R, points=pts, epsabs=1e-15, epsrel=1e-13, limit=400)
    return val


def monte_carlo_quasi_projector(R, d, samples, rng):
    """R^2 <|z><z|> over uniform samples of the disc |z| <= R, plus standard errors."""
    r = R * np.sqrt(rng.uniform(size=samples))
    z = r * np.exp(2j * math.pi * rng.uniform(size=samples))
    Z = phase_space._coherent_rows(z, d)
    acc = np.zeros((d, d), dtype=complex)
    acc2 = np.zeros((d, d))
    for chunk in np.array_split(np.arange(samples), 20):
        outer = Z[chunk, :, None] * Z[chunk, None, :].conj()
        acc += outer.sum(axis=0)
        acc2 += (np.abs(outer) ** 2).sum(axis=0)
    mean = acc / samples
    var = acc2 / samples - np.abs(mean) ** 2
    return R * R * mean, R * R * np.sqrt(var / samples)


class TestLambdaProfile:
    def test_closed_form_median(self):
        R = math.sqrt(math.log(2))
        assert lambda_profile(R, 1)[0] == pytest.approx(0.5, abs=1e-15)

    def test_empty_region(self):
        np.testing.assert_array_equal(lambda_profile(0.0, 6), np.zeros(6))
        assert np.all(lambda_profile(1e-8, 6) < 1e-15)

    def test_large_radius(self):
        assert abs(lambda_profile(20.0, 4)[3] - lambda_by_quadrature(3, 20.0)) <= 1e-12
        assert abs(lambda_profile(20.0, 4)[3] - 1.0) <= 1e-12

    @pytest.mark.parametrize("R", [0.5, 2.0, 5.0, 10.0])
    def test_against_quadrature(self, R):
        prof = lambda_profile(R, 151)
        for n in range(0, 151, 5):
            assert abs(prof[n] - lambda_by_quadrature(n, R)) <= 1e-10

    @settings(max_examples=40, deadline=None)
    @given(R=st.floats(0.01, 25.0), count=st.integers(1, 300))
    def test_bounded_and_monotone_in_n(self, R, count):
        lam = lambda_profile(R, count)
        assert np.all((lam >= 0) & (lam <= 1))
        assert np.all(np.diff(lam) <= 0)

    @settings(max_examples=40, deadline=None)
    @given(R=st.floats(0.01, 20.0), dR=st.floats(0.0, 3.0))
    def test_monotone_in_radius(self, R, dR):
        assert np.all(lambda_profile(R + dR, 60) >= lambda_profile(R, 60) - 1e-15)

    @pytest.mark.parametrize("n", [25, 100, 400])
    def test_localization_crossover(self, n):
        assert lambda_profile(1.5 * math.sqrt(n), n + 1)[n] >= 0.99
        assert lambda_profile(0.5 * math.sqrt(n), n + 1)[n] <= 0.01


class TestQuasiProjector:
    def test_diagonal_by_construction(self):
        P = quasi_projector(3.0, 20)
        assert np.count_nonzero(P - np.diag(np.diag(P))) == 0
        np.testing.assert_array_equal(np.diag(P).real, lambda_profile(3.0, 20))

    def test_single_level(self):
        P = quasi_projector(math.sqrt(math.log(2)), 1)
        assert P.shape == (1, 1)
        assert P[0, 0] == pytest.approx(0.5, abs=1e-15)

    def test_dimension_too_small(self):
        with pytest.raises(DimensionError):
            quasi_projector(5.0, 20)

    def test_monte_carlo_small(self, rng):
        R, d = 1.5, 10
        est, se = monte_carlo_quasi_projector(R, d, 20000, rng)
        P = quasi_projector(R, d)
        assert np.all(np.abs(est - P) <= 5 * se + 1e-12)


class TestRounding:
    @pytest.mark.parametrize("R", [1.0, 2.5, 4.0])
    def test_rounds_quasi_projector(self, R):
        d = 40
        lam = lambda_profile(R, d)
        N = int(np.max(np.nonzero(lam >= 0.5)[0]))
        E = round_to_projector(quasi_projector(R, d), 0.5)
        np.testing.assert_allclose(E, exact_projector(N, d), atol=1e-15)

    def test_fixed_point(self):
        E = displaced_projector(3, (0.5, 1.0), 40)
        assert np.max(np.abs(round_to_projector(E) - E)) <= 1e-12

    def test_zero(self):
        Z = np.zeros((5, 5), dtype=complex)
        np.testing.assert_array_equal(round_to_projector(Z), Z)

    def test_errors(self):
        with pytest.raises(NotHermitianError):
            round_to_projector(np.array([[0.5, 0.1], [0.0, 0.5]]))
        with pytest.raises(EigenvalueRangeError):
            round_to_projector(np.diag([1.5, 0.2]))
        with pytest.raises(FockError):
            round_to_projector(np.diag([0.5, 0.2]), threshold=1.0)

    @pytest.mark.parametrize("R", [2.0, 3.3, 5.0, 7.5, 12.0])
    def test_rank_tracks_area(self, R):
        d = int(R * R + 8 * R + 20)
        E = round_to_projector(quasi_projector(R, d), 0.5)
        rank = round(np.trace(E).real)
        assert rank == int(np.count_nonzero(lambda_profile(R, d) >= 0.5))
        assert abs(rank - R * R) <= 3 * R + 5
        assert rank == rank_for_radius(R)

    @pytest.mark.parametrize("R", [2.0, 4.0, 8.0, 12.0])
    def test_threshold_ambiguity_within_transition(self, R):
        d = int(R * R + 8 * R + 20)
        lam = lambda_profile(R, d)
        width = int(np.count_nonzero((lam > 0.01) & (lam < 0.99)))
        P = quasi_projector(R, d)
        r3 = np.trace(round_to_projector(P, 0.3)).real
        r7 = np.trace(round_to_projector(P, 0.7)).real
        assert 0 <= r3 - r7 <= width


class TestExactProjector:
    def test_vacuum(self):
        np.testing.assert_array_equal(exact_projector(0, 3), np.diag([1, 0, 0]))

    @pytest.mark.parametrize("N,d", [(0, 1), (4, 10), (9, 10)])
    def test_trace_and_idempotence(self, N, d):
        E = exact_projector(N, d)
        assert np.trace(E).real == N + 1
        assert np.max(np.abs(E @ E - E)) == 0.0

    def test_rank_exceeds(self):
        with pytest.raises(DimensionError):
            exact_projector(3, 3)


class TestDisplaced:
    def test_origin(self):
        np.testing.assert_array_equal(displaced_projector(4, (0, 0), 20), exact_projector(4, 20))

    @pytest.mark.parametrize("center", [(1.0, 0.0), (-2.0, 1.5), (0.3, -3.0)])
    def test_trace_and_exactness(self, center):
        E = displaced_projector(5, center, 96)
        assert abs(np.trace(E).real - 6) <= 1e-12
        assert fock.projector_defect(E) <= 1e-12
        assert fock.hermiticity_defect(E) <= 1e-12

    def test_husimi_covariance(self):
        E = displaced_projector(5, (0.0, math.sqrt(2.0)), 80)
        assert abs(phase_space.husimi(E, 1.0) - phase_space.husimi(exact_projector(5, 80), 0.0)) <= 1e-8

    def test_complement(self):
        E = displaced_projector(4, (1.0, -1.0), 64)
        Ebar = np.eye(64) - E
        assert fock.projector_defect(Ebar) <= 1e-12
        assert np.max(np.abs(E @ Ebar)) <= 1e-12

    def test_rank_exceeds(self):
        with pytest.raises(DimensionError):
            displaced_projector(10, (1, 1), 10)


class TestElliptical:
    def test_reduces_to_displaced(self):
        spec = Ellipse(center=(1.0, -0.5), squeeze=0.0, rotation=0.0, rank=4)
        np.testing.assert_allclose(elliptical_projector(spec, 64),
                                   displaced_projector(3, (1.0, -0.5), 64), atol=1e-12)

    @pytest.mark.parametrize("xi,theta", [(0.4, 0.0), (0.3 + 0.2j, 1.1), (-0.5, 2.0)])
    def test_trace_and_exactness(self, xi, theta):
        E = elliptical_projector(Ellipse((0.5, 0.5), xi, theta, 5), 96)
        assert abs(np.trace(E).real - 5) <= 1e-12
        assert fock.projector_defect(E) <= 1e-12

    def test_wigner_mass_inside_ellipse(self):
        N, r = 10, 0.5
        E = elliptical_projector(Ellipse((0.0, 0.0), r, 0.0, N + 1), 128)
        g = phase_space.wigner_grid(E, np.linspace(-16, 16, 161), np.linspace(-8, 8, 121))
        P, Q = g.mesh()
        a_p, a_q = math.exp(r) * math.sqrt(2 * N), math.exp(-r) * math.sqrt(2 * N)
        inside = (P / a_p) ** 2 + (Q / a_q) ** 2 <= 1.0
        assert g.integrate(inside) / g.integrate() >= 0.9

    def test_rank_exceeds(self):
        with pytest.raises(DimensionError):
            elliptical_projector(Ellipse(rank=9), 8)


class TestGeneralRegion:
    def test_harmonic_reproduces_circle(self):
        E, k = general_region_projector(GeneralRegion(dynamics.Potential(), 8), 128)
        assert np.max(np.abs(E - exact_projector(7, 128))) <= 1e-8
        assert k == pytest.approx(8.0, abs=1e-8)  # midpoint of 7.5 and 8.5

    @pytest.mark.parametrize("pot,levels", [
        (QUARTIC, 8),
        (dynamics.Potential.polynomial([0, 0, 1.0, 0.1, 0.05]), 5),
        (dynamics.Potential.tabulated(np.linspace(-6, 6, 121), np.linspace(-6, 6, 121) ** 2), 6),
    ])
    def test_exactness(self, pot, levels):
        E, _ = general_region_projector(GeneralRegion(pot, levels), 64)
        assert fock.projector_defect(E) <= 1e-12
        assert fock.hermiticity_defect(E) <= 1e-12
        assert abs(np.trace(E).real - levels) <= 1e-12

    def test_quartic_localization(self):
        E, k = general_region_projector(GeneralRegion(QUARTIC, 8), 128)
        g = phase_space.wigner_grid(E, np.linspace(-8, 8, 201), np.linspace(-5, 5, 201))
        P, Q = g.mesh()
        inside = 0.5 * P ** 2 + 0.25 * Q ** 4 <= k
        assert g.integrate(inside) / 8 >= 0.85

    def test_levels_limit(self):
        with pytest.raises(DimensionError):
            general_region_projector(GeneralRegion(QUARTIC, 9), 16)

    def test_truncation_edge_warning(self):
        # a shallow quadratic well barely rises across the represented range
        shallow = dynamics.Potential.polynomial([0, 0, 0.05])
        with pytest.warns(NonConfiningWarning):
            general_region_projector(GeneralRegion(shallow, 10), 24)

    def test_no_warning_when_well_inside(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            general_region_projector(GeneralRegion(QUARTIC, 4), 64)


class TestRegionDispatch:
    def test_circle_rank_from_radius(self):
        E = region_projector(Circle(math.sqrt(11.0)), 64)
        np.testing.assert_array_equal(E, exact_projector(10, 64))

    def test_circle_with_pinned_rank(self):
        E = region_projector(Circle(1.0, (1.0, 0.0), N=3), 64)
        assert abs(np.trace(E).real - 4) <= 1e-12

    def test_tiny_circle_rejected(self):
        with pytest.raises(FockError):
            region_projector(Circle(0.5), 16)

    def test_invalid_specs(self):
        with pytest.raises(FockError):
            Circle(-1.0)
        with pytest.raises(FockError):
            Ellipse(rank=0)
        with pytest.raises(FockError):
            GeneralRegion(QUARTIC, 0)
