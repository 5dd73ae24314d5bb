"""Radial Green's functions: closed forms, ODE residuals, tail integrals,
regular parts, and regularized traces."""

import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spherehess.errors import DomainError, FitUnstable, ParityError
from spherehess.greens import (
    RegularPartConfig,
    TraceKind,
    chart_radius,
    green_D2,
    green_D2_closed3,
    green_D2_printed_bracket,
    green_D2_quadrature,
    green_L,
    green_L2,
    green_L_profile,
    green_L2_profile,
    green_D2_profile,
    homogeneous_mode_residual,
    kv_trace_D2,
    kv_trace_L2,
    ode_residual_L,
    ode_residual_L2,
    regular_part,
    spectral_convention_factor,
    spectral_trace_reference,
    tau_tail_exact,
    tau_tail_quadrature,
    trace_from_pipeline,
    trace_sign_expected,
    zform_operator,
)

R_GRID = [0.3 + 0.1 * i for i in range(28)]


class TestTauTail:
    CASES = [(0, 2), (2, 2), (4, 2), (2, 1), (4, 1), (6, 1)]

    @pytest.mark.parametrize("a,p", CASES)
    def test_closed_form_matches_mpmath_oracle(self, a, p):
        exact = tau_tail_exact(a, p)
        with mpmath.workdps(40):
            for x in (0.3, 1.0, 2.5):
                oracle = mpmath.quad(
                    lambda t: t ** (-a) * (1 + t * t) ** (-p),
                    [x, mpmath.inf],
                )
                assert exact.value(x) == pytest.approx(float(oracle), rel=1e-13)

    @pytest.mark.parametrize("a,p", CASES)
    def test_quadrature_twin_agrees(self, a, p):
        exact = tau_tail_exact(a, p)
        for x in (0.25, 0.6, 1.0, 1.8, 3.0):
            got = tau_tail_quadrature(a, p, x)
            assert abs(got - exact.value(x)) <= 1e-10 * max(1.0, abs(got))

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from(CASES), st.floats(0.1, 4.0), st.floats(0.05, 1.0))
    def test_tail_decreasing_and_positive(self, case, x, dx):
        a, p = case
        exact = tau_tail_exact(a, p)
        assert exact.value(x) > exact.value(x + dx) > 0

    def test_domain(self):
        with pytest.raises(DomainError):
            tau_tail_quadrature(2, 1, 0.0)


class TestGreenL:
    def test_pinned_antipodal_values(self):
        assert green_L(3, math.pi) == pytest.approx(1 / (16 * math.pi), rel=1e-14)
        assert green_L(5, math.pi) == pytest.approx(
            1 / (128 * math.pi**2), rel=1e-14
        )

    @pytest.mark.parametrize("n", [3, 5, 7])
    def test_ode_residual(self, n):
        assert ode_residual_L(n, R_GRID) <= 1e-8

    @pytest.mark.parametrize("n", [3, 5, 7])
    def test_homogeneous_modes_in_z_form(self, n):
        for sigma in (+1, -1):
            for z in (-0.7, 0.0, 0.4, 0.9):
                assert abs(homogeneous_mode_residual(n, sigma, z)) < 1e-11

    def test_even_dimension_rejected(self):
        with pytest.raises(ParityError):
            green_L(4, 1.0)

    def test_z_form_linearity(self):
        # the z-form operator is linear in (y, y', y'')
        val = zform_operator(5, 2.0, 3.0, 4.0, 0.3)
        parts = (
            zform_operator(5, 2.0, 0.0, 0.0, 0.3)
            + zform_operator(5, 0.0, 3.0, 0.0, 0.3)
            + zform_operator(5, 0.0, 0.0, 4.0, 0.3)
        )
        assert val == pytest.approx(parts, rel=1e-14)


class TestGreenL2:
    @pytest.mark.parametrize("n", [3, 5, 7])
    def test_defining_ode(self, n):
        assert ode_residual_L2(n, R_GRID) <= 1e-8

    def test_profile_carries_exact_tail_integral(self):
        prof = green_L2_profile(5)
        assert prof.closed_form_params is not None

    def test_three_sphere_has_no_singular_part(self):
        assert green_L2_profile(3).singular_orders == ()
        assert green_L2_profile(5).singular_orders == (-1,)


class TestGreenD2:
    @pytest.mark.parametrize("n", [3, 5, 7])
    def test_dual_route_agreement(self, n):
        for r in R_GRID:
            x = chart_radius(r)
            a = green_D2_printed_bracket(n, x)
            b = green_D2_quadrature(n, x)
            assert abs(a - b) <= 1e-9 * max(abs(a), abs(b))

    def test_large_radius_stability(self):
        # the bracket is evaluated through the arctangent remainder series
        # beyond x = 1.5; both routes must still agree to near machine level
        for n in (3, 5, 7, 9):
            for x in (2.0, 8.0, 30.0, 120.0):
                a = green_D2_printed_bracket(n, x)
                b = green_D2_quadrature(n, x)
                assert abs(a - b) <= 1e-11 * max(abs(a), abs(b))

    def test_closed_form_three_sphere(self):
        for r in (0.4, 1.0, 2.0, 2.8):
            assert green_D2(3, chart_radius(r)) == pytest.approx(
                green_D2_closed3(r), rel=1e-12
            )

    def test_printed_example_x_equals_one(self):
        # at x = 1 (r = pi/2) the n = 3 bracket contributes 2 (1 - pi/4)
        # and the chart prefactor is ((1 + x^2)/4) / vol(S^2) = 1/(8 pi)
        expected = (1 / (8 * math.pi)) * 2 * (1 - math.pi / 4)
        assert green_D2_printed_bracket(3, 1.0) == pytest.approx(expected, rel=1e-14)


class TestRegularPart:
    def test_synthetic_extraction(self):
        def f(r):
            return 3.7 * r**-3 - 1.2 * r**-1 + 0.625 + 0.4 * r**2

        # Window large enough that the r^-3 term does not exhaust double
        # precision at the smallest nodes.
        cfg = RegularPartConfig(window=(3e-2, 0.5))
        res = regular_part(f, singular_orders=(-3, -1), config=cfg)
        assert res.value == pytest.approx(0.625, abs=1e-8)
        assert res.singular_coeffs[-3] == pytest.approx(3.7, rel=1e-6)
        assert res.singular_coeffs[-1] == pytest.approx(-1.2, rel=1e-6)

    def test_unstable_fit_raises(self):
        rng = np.random.default_rng(3)

        def noisy(r):
            return 1.0 / r + float(rng.normal()) * 10.0

        with pytest.raises(FitUnstable):
            regular_part(noisy, singular_orders=(-1,))

    def test_window_validation(self):
        with pytest.raises(DomainError):
            regular_part(lambda r: r, config=RegularPartConfig(window=(0.1, 0.01)))


class TestTraces:
    def test_frozen_values(self):
        assert kv_trace_L2(1) == (Fraction(3, 128), 2)
        assert kv_trace_L2(2) == (Fraction(-5, 2048), 2)
        assert kv_trace_D2(1) == (Fraction(-1, 4), 2)
        assert kv_trace_D2(2) == (Fraction(3, 16), 2)

    @pytest.mark.parametrize("k", range(1, 11))
    def test_sign_laws(self, k):
        l2, _ = kv_trace_L2(k)
        d2, _ = kv_trace_D2(k)
        assert (1 if l2 > 0 else -1) == trace_sign_expected(TraceKind.L2, k)
        assert (1 if d2 > 0 else -1) == trace_sign_expected(TraceKind.D2, k)
        assert trace_sign_expected(TraceKind.L2, k) == (-1) ** (k + 1)
        assert trace_sign_expected(TraceKind.D2, k) == (-1) ** k

    def test_spectral_reference_frozen(self):
        assert spectral_trace_reference(TraceKind.L2, 1) == pytest.approx(
            math.pi**2 / 4, rel=1e-10
        )
        assert spectral_trace_reference(TraceKind.L2, 2) == pytest.approx(
            -math.pi**2 / 64, rel=1e-10
        )
        assert spectral_trace_reference(TraceKind.D2, 1) == pytest.approx(
            -math.pi**2 / 4, rel=1e-10
        )
        assert spectral_trace_reference(TraceKind.D2, 2) == pytest.approx(
            3 * math.pi**2 / 32, rel=1e-10
        )

    def test_pipeline_matches_spectral_reference(self):
        # regular part x volume, times the exact convention factor, equals
        # the independent spectral continuation
        for kind in TraceKind:
            for k in (1, 2):
                pipe = trace_from_pipeline(kind, k)
                factor = spectral_convention_factor(kind, k)
                ref = spectral_trace_reference(kind, k)
                assert factor * pipe.value == pytest.approx(ref, rel=1e-5)
