"""Exact rational symbol calculus for the linearized curvature operators."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from spherehess.errors import (
    DomainError,
    ParityError,
    PreconditionViolation,
    ZeroCovector,
)
from spherehess.qcurv import (
    ahlfors_symbol,
    as_matrix,
    as_vector,
    frobenius,
    hessian_symbol,
    identity,
    laplacian_symbol,
    lin_obstruction_symbol,
    lin_obstruction_symbol_direct,
    lin_ricci_symbol,
    lin_scalar_symbol,
    lin_schouten_from_ricci,
    lin_schouten_symbol,
    mat_apply,
    mat_scale,
    mat_trace,
    project_tt,
    q_hessian_expected,
    q_hessian_symbol,
    xi_norm_sq,
)

small_frac = st.fractions(
    min_value=Fraction(-3), max_value=Fraction(3), max_denominator=4
)


def _vec(entries):
    return as_vector([Fraction(e) for e in entries])


def _sym(rows):
    mat = [[Fraction(x) for x in row] for row in rows]
    return as_matrix([[mat[i][j] + mat[j][i] for j in range(len(mat))]
                      for i in range(len(mat))])


def _tt_sample(rng_ints, n):
    """Build a transverse trace-free rational matrix from an integer seed."""
    if not any(rng_ints):
        raise ValueError("seed data must contain a nonzero entry")
    it = itertools.cycle(rng_ints)
    while True:
        xi = tuple(Fraction(next(it)) for _ in range(n))
        if any(xi):
            break
    raw = [[Fraction(next(it)) for _ in range(n)] for _ in range(n)]
    sym = [[raw[i][j] + raw[j][i] for j in range(n)] for i in range(n)]
    return xi, project_tt(xi, as_matrix(sym))


class TestConventions:
    def test_laplacian_symbol_is_minus_norm_squared(self):
        xi = _vec((1, 2, 2))
        assert laplacian_symbol(xi) == -9

    def test_hessian_symbol_is_minus_outer(self):
        xi = _vec((1, 2))
        assert hessian_symbol(xi) == ((-1, -2), (-2, -4))


class TestScalarAndRicci:
    def test_scalar_formula(self):
        xi = _vec((1, 0, 0, 0))
        k = _sym([[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 3, 0], [0, 0, 0, 4]])
        # -xi.k xi + |xi|^2 tr k = -2 + 20
        assert lin_scalar_symbol(4, xi, k).value == 18

    def test_scalar_vanishes_on_tt(self):
        xi, k = _tt_sample([1, 2, -1, 3, 0, 1, -2, 4, 1, 0, 2, -3, 1, 1, 0,
                            2, -1, 3, 2, 0, 1], 4)
        assert lin_scalar_symbol(4, xi, k).value == 0

    def test_ricci_is_symmetric_and_traces_to_scalar(self):
        xi = _vec((1, 2, 0, -1))
        k = _sym([[2, 1, 0, 0], [1, -1, 3, 0], [0, 3, 0, 1], [0, 0, 1, 2]])
        ric = lin_ricci_symbol(4, xi, k).value
        assert all(ric[i][j] == ric[j][i] for i in range(4) for j in range(4))
        # the trace of the Ricci linearization recovers the scalar one
        scal = lin_scalar_symbol(4, xi, k).value
        assert mat_trace(ric) == scal


class TestSchouten:
    def test_dual_routes_agree(self):
        data = [3, 1, -2, 0, 2, 1, 4, -1, 0, 2, 1, -3, 2, 0, 1, 1, -2, 3,
                0, 1, 2, -1, 0, 4, 1]
        for n in (4, 6):
            xi, k = _tt_sample(data, n)
            a = lin_schouten_symbol(n, xi, k).value
            b = lin_schouten_from_ricci(n, xi, k).value
            assert a == b

    def test_tt_value(self):
        xi, k = _tt_sample([2, 0, -1, 1, 3, -2, 0, 1, 2, 4, -1, 0, 1, 2, 0,
                            3, 1, -1, 0, 2], 4)
        got = lin_schouten_symbol(4, xi, k).value
        want = mat_scale(xi_norm_sq(xi) * Fraction(1, 2 * (4 - 2)), k)
        assert got == want

    def test_requires_tt_input(self):
        xi = _vec((1, 0, 0, 0))
        k = _sym([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
        with pytest.raises(PreconditionViolation):
            lin_schouten_symbol(4, xi, k)


class TestObstruction:
    @pytest.mark.parametrize("n", [4, 6, 8])
    def test_assembled_equals_direct_equals_closed_form(self, n):
        data = list(range(1, n * n + n + 5))
        xi, k = _tt_sample(data, n)
        assembled = lin_obstruction_symbol(n, xi, k).value
        direct = lin_obstruction_symbol_direct(n, xi, k).value
        closed = mat_scale(
            Fraction((-1) ** (n // 2 + 1), 2 * (n - 2)) * xi_norm_sq(xi) ** (n // 2),
            k,
        )
        assert assembled == direct == closed

    def test_odd_dimension_rejected(self):
        xi, k = _tt_sample([1, 0, 1, 2, -1, 0, 3, 1, 0, 2, 1, -1, 0, 1, 2], 3)
        with pytest.raises((ParityError, DomainError)):
            lin_obstruction_symbol(3, xi, k)


class TestQHessian:
    @settings(max_examples=60, deadline=None)
    @given(st.sampled_from([4, 6]), st.lists(st.integers(-4, 4), min_size=60,
                                             max_size=60))
    def test_identity_random(self, n, data):
        if not any(data[:n]):
            data = [1] + data
        xi, k = _tt_sample(data, n)
        got = q_hessian_symbol(n, xi, k)
        want = q_hessian_expected(n, xi, k)
        assert got == want
        assert got.value == mat_scale(
            -Fraction(1, 4) * xi_norm_sq(xi) ** (n // 2), k
        )


class TestAhlfors:
    def test_trace_free(self):
        xi = _vec((1, 2, -1, 0))
        vec = _vec((3, 0, 1, -2))
        s = ahlfors_symbol(4, xi, vec).value
        assert mat_trace(s) == 0

    def test_adjoint_identity_on_tt(self):
        # <S(xi, X), k> = <X, 2 k xi> for trace-free transverse k
        xi, k = _tt_sample([1, -1, 2, 0, 3, 1, 0, -2, 1, 2, 0, 1, 3, -1, 0,
                            1, 2, 0, -1, 1], 4)
        vec = _vec((2, -1, 0, 3))
        s = ahlfors_symbol(4, xi, vec).value
        lhs = frobenius(s, k)
        rhs = sum(
            2 * v * kv for v, kv in zip(vec, mat_apply(k, xi))
        )
        assert lhs == rhs


class TestProjectTT:
    def test_output_is_tt(self):
        xi = _vec((1, 2, 2, 0))
        m = _sym([[5, 1, 0, 2], [1, -3, 1, 0], [0, 1, 2, 1], [2, 0, 1, 1]])
        k = project_tt(xi, m)
        assert mat_trace(k) == 0
        assert all(v == 0 for v in mat_apply(k, xi))

    def test_idempotent(self):
        xi = _vec((1, 0, -1))
        m = _sym([[2, 1, 0], [1, 0, 1], [0, 1, -2]])
        once = project_tt(xi, m)
        assert project_tt(xi, once) == once

    def test_zero_covector(self):
        with pytest.raises(ZeroCovector):
            project_tt(_vec((0, 0, 0)), identity(3))
