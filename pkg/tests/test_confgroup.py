"""Moebius action, conformal factors, tensor pairings, and the chart-level
conformal Killing operator."""

import math
from fractions import Fraction

import numpy as np
import pytest

from spherehess.errors import Degenerate, DomainError
from spherehess.confgroup import (
    ChartMap,
    RepWeight,
    act,
    act_many,
    ahlfors_chart,
    chart_dilation,
    chart_inversion,
    chart_lambda,
    chart_rotation,
    chart_translation,
    check_ahlfors_covariance,
    check_pairing_invariance,
    cocycle_residual,
    compose,
    compose_chart,
    conformal_factor,
    conformality_residual,
    differential,
    frame_at,
    inverse,
    inverse_stereographic,
    lorentz_form_residual,
    metric_field,
    moebius_boost,
    moebius_identity,
    moebius_rotation,
    pairing,
    polynomial_tensor_field,
    pullback_field,
    random_band_limited_field,
    random_moebius,
    sphere_conformal_fields,
    sphere_grid,
    sphere_monomial_integral,
    stereographic,
    u_action,
)
from spherehess.exact import sphere_volume


def _unit(rng, dim):
    y = rng.normal(size=dim)
    return y / np.linalg.norm(y)


class TestGroup:
    def test_lorentz_form_enforced(self):
        bad = np.eye(5)
        bad[0, 0] = 2.0
        with pytest.raises(DomainError):
            from spherehess.confgroup import MoebiusElement

            MoebiusElement(n=3, matrix=bad)

    @pytest.mark.parametrize("n", [2, 3])
    def test_action_stays_on_sphere_and_inverts(self, n):
        rng = np.random.default_rng(0)
        a = random_moebius(rng, n, 1.0)
        assert lorentz_form_residual(a) < 1e-12
        y = _unit(rng, n + 1)
        z = act(a, y)
        assert abs(np.linalg.norm(z) - 1.0) < 1e-12
        assert np.max(np.abs(act(inverse(a), z) - y)) < 1e-11

    def test_identity_and_composition(self):
        rng = np.random.default_rng(1)
        a = random_moebius(rng, 2, 0.8)
        b = random_moebius(rng, 2, 0.8)
        y = _unit(rng, 3)
        assert np.max(np.abs(act(moebius_identity(2), y) - y)) == 0.0
        assert np.max(np.abs(act(compose(a, b), y) - act(a, act(b, y)))) < 1e-12

    def test_boost_fixed_points_and_factors(self):
        s = 0.7
        north = np.array([0.0, 0.0, 1.0])
        boost = moebius_boost(2, 2, s)
        assert np.max(np.abs(act(boost, north) - north)) < 1e-15
        assert conformal_factor(boost, north) == pytest.approx(math.exp(-s))
        assert conformal_factor(boost, -north) == pytest.approx(math.exp(s))

    def test_rotation_is_isometry(self):
        rot = moebius_rotation(3, 0, 2, 0.9)
        rng = np.random.default_rng(2)
        for _ in range(5):
            y = _unit(rng, 4)
            assert conformal_factor(rot, y) == pytest.approx(1.0, abs=1e-15)

    def test_time_reversal_outside_identity_component(self):
        mat = np.eye(4)
        mat[3, 3] = -1.0
        from spherehess.confgroup import MoebiusElement

        flip = MoebiusElement(n=2, matrix=mat)
        with pytest.raises(Degenerate):
            conformal_factor(flip, np.array([0.0, 0.0, 1.0]))


class TestDifferential:
    @pytest.mark.parametrize("n", [2, 3])
    def test_exact_jacobian_matches_finite_difference(self, n):
        rng = np.random.default_rng(3)
        a = random_moebius(rng, n, 1.0)
        y = _unit(rng, n + 1)
        jac = differential(a, y)
        frame = frame_at(y)
        h = 1e-6
        for col in range(n):
            v = frame[:, col]
            yp = (y + h * v) / np.linalg.norm(y + h * v)
            ym = (y - h * v) / np.linalg.norm(y - h * v)
            fd = (act(a, yp) - act(a, ym)) / (2 * h)
            assert np.max(np.abs(jac @ v - fd)) < 1e-6

    @pytest.mark.parametrize("n", [2, 3])
    def test_conformality_and_cocycle(self, n):
        rng = np.random.default_rng(4)
        for _ in range(5):
            a = random_moebius(rng, n, 1.0)
            b = random_moebius(rng, n, 1.0)
            y = _unit(rng, n + 1)
            assert conformality_residual(a, y) <= 1e-7
            assert cocycle_residual(a, b, y) <= 1e-7


class TestGrids:
    @pytest.mark.parametrize("n", [2, 3])
    def test_weights_sum_to_volume(self, n):
        g = sphere_grid(n, 40)
        assert abs(float(np.sum(g.weights)) - sphere_volume(n)) < 1e-10 * sphere_volume(n)

    def test_monomial_exactness(self):
        g2 = sphere_grid(2, 40)
        for alpha in [(2, 0, 0), (0, 4, 0), (2, 2, 2), (0, 0, 8), (3, 1, 0)]:
            vals = np.prod(g2.nodes ** np.array(alpha), axis=1)
            assert g2.integrate(vals) == pytest.approx(
                sphere_monomial_integral(alpha), abs=1e-10
            )
        g3 = sphere_grid(3, 40)
        for alpha in [(2, 0, 0, 0), (0, 2, 2, 0), (0, 0, 0, 6), (2, 2, 2, 2)]:
            vals = np.prod(g3.nodes ** np.array(alpha), axis=1)
            assert g3.integrate(vals) == pytest.approx(
                sphere_monomial_integral(alpha), abs=1e-10
            )

    def test_monomial_oracle(self):
        # integral of y_1^2 over S^2 is vol/3 = 4 pi / 3
        assert sphere_monomial_integral((2, 0, 0)) == pytest.approx(
            4 * math.pi / 3, rel=1e-14
        )
        assert sphere_monomial_integral((1, 0, 0)) == 0.0

    def test_round_metric_pairing(self):
        for n in (2, 3):
            g = sphere_grid(n, 40)
            met = metric_field(n)
            assert pairing(met, met, g) == pytest.approx(
                n * sphere_volume(n), rel=1e-12
            )


class TestTensorAction:
    @pytest.mark.parametrize("n", [2, 3])
    def test_pairing_invariance(self, n):
        rng = np.random.default_rng(5)
        g = sphere_grid(n, 40)
        h = random_band_limited_field(rng, n)
        k = random_band_limited_field(rng, n)
        a = random_moebius(rng, n, 1.0)
        base = pairing(h, k, g)
        assert check_pairing_invariance(h, k, a, g) <= 1e-6 * (1 + abs(base))

    def test_u_action_is_a_right_action(self):
        rng = np.random.default_rng(6)
        n = 2
        g = sphere_grid(n, 20)
        w = RepWeight.of(n, Fraction(1, 2))
        fld = random_band_limited_field(rng, n)
        a = random_moebius(rng, n, 0.7)
        b = random_moebius(rng, n, 0.7)
        combined = u_action(w, compose(a, b), fld).sample(g)
        nested = u_action(w, b, u_action(w, a, fld)).sample(g)
        scale = np.max(np.abs(combined)) + 1e-30
        assert np.max(np.abs(combined - nested)) / scale < 1e-12

    def test_pullback_by_rotation_rotates_values(self):
        n = 2
        const = np.diag([1.0, -1.0, 0.0])
        fld = polynomial_tensor_field(n, const)
        rot = moebius_rotation(n, 0, 1, 0.5)
        pulled = pullback_field(rot, fld)
        rng = np.random.default_rng(7)
        ys = np.stack([_unit(rng, 3) for _ in range(4)])
        rmat = rot.matrix[:3, :3]
        want = fld.evaluate(ys @ rmat.T)
        got = pulled.evaluate(ys)
        moved = np.einsum("ji,njk,kl->nil", rmat, want, rmat)
        assert np.max(np.abs(got - moved)) < 1e-12

    def test_rep_weight_validation(self):
        with pytest.raises(DomainError):
            RepWeight(n=2, rho=Fraction(3, 2), nu=Fraction(0))
        assert RepWeight.of(3, Fraction(-3, 2)).pullback_exponent == -2.0


class TestChart:
    def test_stereographic_round_trip(self):
        rng = np.random.default_rng(8)
        for _ in range(5):
            x = rng.normal(size=3)
            assert np.max(np.abs(stereographic(inverse_stereographic(x)) - x)) < 1e-12

    def test_chart_map_jacobians(self):
        rng = np.random.default_rng(9)
        qmat, rmat = np.linalg.qr(rng.normal(size=(3, 3)))
        qmat = qmat @ np.diag(np.sign(np.diag(rmat)))
        phi = compose_chart(
            chart_translation([0.3, -0.2, 0.5]),
            chart_rotation(qmat),
            chart_inversion(),
            chart_dilation(1.7),
        )
        x = np.array([0.4, 0.1, -0.3])
        h = 1e-6
        jac = phi.jacobian(x)
        for i in range(3):
            e = np.zeros(3)
            e[i] = h
            fd = (phi.apply(x + e) - phi.apply(x - e)) / (2 * h)
            assert np.max(np.abs(jac[:, i] - fd)) < 1e-6
        # conformal scale consistency: J^T J = mu^2 Id
        gram = jac.T @ jac
        assert np.max(np.abs(gram - phi.mu(x) ** 2 * np.eye(3))) < 1e-12

    def test_inversion_at_origin_degenerate(self):
        with pytest.raises(Degenerate):
            chart_inversion().apply(np.zeros(2))

    def test_round_factor_matches_metric_pullback(self):
        phi = compose_chart(chart_translation([1.0, 0.5]), chart_dilation(0.6))
        x = np.array([0.2, -0.7])
        jac = phi.jacobian(x)
        lhs = chart_lambda(phi.apply(x)) ** 2 * (jac.T @ jac)
        om = phi.conformal_factor_round(x)
        rhs = om**2 * chart_lambda(x) ** 2 * np.eye(2)
        assert np.max(np.abs(lhs - rhs)) < 1e-12


class TestAhlfors:
    @pytest.mark.parametrize("n", [2, 3])
    def test_matches_flat_operator_times_lambda_squared(self, n):
        # S_g X = lambda^2 (dX + dX^T - (2/n) div X) for the round chart metric
        rng = np.random.default_rng(10)
        lin = rng.normal(size=(n, n))
        const = rng.normal(size=n)

        def vec_field(x):
            return const + lin @ x

        x = rng.normal(size=n) * 0.8
        lam = chart_lambda(x)
        flat = lin + lin.T - (2.0 / n) * np.trace(lin) * np.eye(n)
        got = ahlfors_chart(vec_field, x)
        assert np.max(np.abs(got - lam**2 * flat)) < 1e-8

    @pytest.mark.parametrize("n", [2, 3])
    def test_trace_free_with_respect_to_g(self, n):
        rng = np.random.default_rng(11)
        lin = rng.normal(size=(n, n))

        def vec_field(x):
            return lin @ x + 0.4 * x * float(x @ x)

        x = rng.normal(size=n) * 0.6
        s = ahlfors_chart(vec_field, x)
        assert abs(np.trace(s)) / chart_lambda(x) ** 2 < 1e-9

    @pytest.mark.parametrize("n", [2, 3])
    def test_conformal_fields_span_kernel(self, n):
        rng = np.random.default_rng(12)
        fields = sphere_conformal_fields(n)
        assert len(fields) == (n + 1) * (n + 2) // 2
        pts = rng.normal(size=(6, n)) * 0.9
        for fld in fields:
            for x in pts:
                assert np.max(np.abs(ahlfors_chart(fld, x))) <= 1e-8

    @pytest.mark.parametrize("n", [2, 3])
    def test_covariance_under_chart_moebius_maps(self, n):
        rng = np.random.default_rng(13)
        lin = rng.normal(size=(n, n))
        const = rng.normal(size=n)

        def vec_field(x):
            return const + lin @ x + 0.3 * x * float(x @ x)

        phi = compose_chart(
            chart_translation(np.full(n, 0.8)),
            chart_inversion(),
            chart_dilation(1.4),
        )
        pts = rng.normal(size=(50, n)) * 0.7
        assert check_ahlfors_covariance(vec_field, phi, pts) <= 1e-6
