"""Exact rational building blocks: rising products, half-integer Gamma,
symbolic constants, sphere volumes."""

import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from spherehess.exact import (
    ExactConst,
    gamma_half_integer,
    rising,
    sphere_volume,
    sphere_volume_exact,
)


class TestRising:
    def test_empty_product_is_one(self):
        assert rising(Fraction(7), 0) == 1

    @given(st.integers(-6, 8), st.integers(0, 7))
    def test_matches_explicit_product(self, start, length):
        expect = Fraction(1)
        for i in range(length):
            expect *= start + i
        assert rising(Fraction(start), length) == expect

    def test_frozen_values(self):
        assert rising(Fraction(2), 4) == 2 * 3 * 4 * 5
        assert rising(Fraction(-3), 3) == -6
        assert rising(Fraction(1, 2), 2) == Fraction(3, 4)


class TestGammaHalfInteger:
    @pytest.mark.parametrize("twice", range(1, 22))
    def test_against_float_gamma(self, twice):
        coeff, has_sqrt_pi = gamma_half_integer(twice)
        value = float(coeff) * (math.sqrt(math.pi) if has_sqrt_pi else 1.0)
        assert value == pytest.approx(math.gamma(twice / 2), rel=1e-14)

    def test_parity_of_sqrt_pi_flag(self):
        for twice in range(1, 22):
            _, has_sqrt_pi = gamma_half_integer(twice)
            assert has_sqrt_pi == (twice % 2 == 1)

    def test_frozen(self):
        assert gamma_half_integer(1) == (Fraction(1), True)  # Gamma(1/2)
        assert gamma_half_integer(3) == (Fraction(1, 2), True)
        assert gamma_half_integer(8) == (Fraction(6), False)  # Gamma(4) = 3!


class TestExactConst:
    def test_float_value(self):
        c = ExactConst(Fraction(3, 4), pi_exp=2, two_exp=Fraction(-1))
        assert float(c) == pytest.approx(0.75 * math.pi**2 / 2, rel=1e-15)

    def test_multiplication_stays_exact(self):
        a = ExactConst(Fraction(1, 3), 1, Fraction(1, 2))
        b = ExactConst(Fraction(6), 1, Fraction(1, 2))
        prod = a * b
        assert prod.coeff == 2 and prod.pi_exp == 2 and prod.two_exp == 1


class TestSphereVolume:
    @pytest.mark.parametrize(
        "m,expect",
        [
            (1, 2 * math.pi),
            (2, 4 * math.pi),
            (3, 2 * math.pi**2),
            (4, 8 * math.pi**2 / 3),
            (5, math.pi**3),
        ],
    )
    def test_known_volumes(self, m, expect):
        assert sphere_volume(m) == pytest.approx(expect, rel=1e-15)

    @pytest.mark.parametrize("m", range(1, 12))
    def test_exact_matches_gamma_oracle(self, m):
        oracle = float(
            2 * mpmath.pi ** ((m + 1) / 2) / mpmath.gamma((m + 1) / 2)
        )
        assert float(sphere_volume_exact(m)) == pytest.approx(oracle, rel=1e-14)
