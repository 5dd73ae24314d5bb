"""Numerical conformal group of the round sphere and its tensor actions.

The identity component of the Lorentz group O(n+1, 1) acts on S^n through
the projective formula

    A . y = (A (y, 1))_{1..n+1} / (A (y, 1))_{n+2},

a conformal transformation whose derivative satisfies
(d phi)^T (d phi) = Omega^2 Id on tangent spaces with Omega(y) = 1 / w_t,
w_t the normalizing coordinate.  On top of the action this module builds:

  * exact ambient Jacobians, conformal factors and their cocycle;
  * weighted pullback actions u_nu(phi) k = Omega^{n/2 + nu - 2} phi^* k on
    lazily-evaluated polynomial tensor fields (no interpolation: fields are
    ambient polynomial matrices projected to the tangent bundle, so they can
    be evaluated exactly at mapped points);
  * product quadrature grids on S^2 and S^3 and the L^2 tensor pairing,
    with the invariance <h, k> = <u_{-n/2} h, u_{n/2} k>;
  * the stereographic-chart conformal Killing operator
    S X = L_X g - (2/n) (div_g X) g for g = lambda^2 delta,
    lambda = 2 / (1 + |x|^2), its kernel fields, and its conformal
    covariance Omega^{-2} phi^*(S X) = S(phi^* X) under chart Moebius maps.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import Degenerate, DomainError
from .exact import sphere_volume

__all__ = [
    "GeneratorTag",
    "MoebiusElement",
    "moebius_identity",
    "moebius_rotation",
    "moebius_rotation_matrix",
    "moebius_boost",
    "compose",
    "inverse",
    "random_moebius",
    "lorentz_form_residual",
    "act",
    "act_many",
    "differential",
    "differential_many",
    "frame_at",
    "conformal_factor",
    "conformal_factor_many",
    "conformality_residual",
    "cocycle_residual",
    "RepWeight",
    "SphereGrid",
    "sphere_grid",
    "sphere_monomial_integral",
    "TensorField",
    "polynomial_tensor_field",
    "metric_field",
    "random_band_limited_field",
    "pullback_field",
    "u_action",
    "pairing",
    "check_pairing_invariance",
    "chart_lambda",
    "ChartPrimitive",
    "ChartMap",
    "chart_translation",
    "chart_dilation",
    "chart_rotation",
    "chart_inversion",
    "compose_chart",
    "random_chart_map",
    "ahlfors_chart",
    "inverse_stereographic",
    "stereographic",
    "sphere_conformal_fields",
    "check_ahlfors_covariance",
]


# ---------------------------------------------------------------------------
# Group elements.
# ---------------------------------------------------------------------------


class GeneratorTag(enum.Enum):
    ROTATION = "ROTATION"
    BOOST = "BOOST"
    COMPOSITE = "COMPOSITE"


def _lorentz_metric(n: int) -> np.ndarray:
    j = np.eye(n + 2)
    j[n + 1, n + 1] = -1.0
    return j


@dataclass(frozen=True)
class MoebiusElement:
    """An (n+2) x (n+2) matrix preserving diag(1, ..., 1, -1)."""

    n: int
    matrix: np.ndarray
    generator_tag: GeneratorTag = GeneratorTag.COMPOSITE

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (self.n + 2, self.n + 2):
            raise DomainError(
                f"matrix must be {(self.n + 2, self.n + 2)}, got {m.shape}"
            )
        object.__setattr__(self, "matrix", m)
        res = lorentz_form_residual(self)
        if res > 1e-12:
            raise DomainError(
                f"matrix violates the Lorentz form by {res:.3e} (> 1e-12)"
            )


def lorentz_form_residual(a: MoebiusElement) -> float:
    """Max-entry residual of M^T J M - J."""
    j = _lorentz_metric(a.n)
    return float(np.max(np.abs(a.matrix.T @ j @ a.matrix - j)))


def moebius_identity(n: int) -> MoebiusElement:
    return MoebiusElement(n=n, matrix=np.eye(n + 2), generator_tag=GeneratorTag.ROTATION)


def moebius_rotation(n: int, axis_i: int, axis_j: int, angle: float) -> MoebiusElement:
    """Rotation by ``angle`` in the spatial (axis_i, axis_j) coordinate plane."""
    if not 0 <= axis_i < axis_j <= n:
        raise DomainError("axes must satisfy 0 <= i < j <= n")
    m = np.eye(n + 2)
    c, s = math.cos(angle), math.sin(angle)
    m[axis_i, axis_i] = c
    m[axis_j, axis_j] = c
    m[axis_i, axis_j] = -s
    m[axis_j, axis_i] = s
    return MoebiusElement(n=n, matrix=m, generator_tag=GeneratorTag.ROTATION)


def moebius_rotation_matrix(n: int, rot: np.ndarray) -> MoebiusElement:
    """Embed an orthogonal (n+1) x (n+1) matrix as a sphere isometry."""
    rot = np.asarray(rot, dtype=float)
    m = np.eye(n + 2)
    m[: n + 1, : n + 1] = rot
    return MoebiusElement(n=n, matrix=m, generator_tag=GeneratorTag.ROTATION)


def moebius_boost(n: int, direction, rapidity: float) -> MoebiusElement:
    """Hyperbolic boost of the given rapidity along a spatial direction.

    Acts in the Lorentz plane spanned by the unit spatial vector and the
    time axis; on the sphere this is a conformal dilation flowing from the
    antipode of ``direction`` toward ``direction``.
    """
    v = np.zeros(n + 1)
    if isinstance(direction, (int, np.integer)):
        v[int(direction)] = 1.0
    else:
        v[:] = np.asarray(direction, dtype=float)
        nrm = float(np.linalg.norm(v))
        if nrm == 0.0:
            raise DomainError("boost direction must be nonzero")
        v /= nrm
    m = np.eye(n + 2)
    c, s = math.cosh(rapidity), math.sinh(rapidity)
    m[: n + 1, : n + 1] += (c - 1.0) * np.outer(v, v)
    m[: n + 1, n + 1] = s * v
    m[n + 1, : n + 1] = s * v
    m[n + 1, n + 1] = c
    return MoebiusElement(n=n, matrix=m, generator_tag=GeneratorTag.BOOST)


def compose(a: MoebiusElement, b: MoebiusElement) -> MoebiusElement:
    """The product element; acts as a then-after b: (a b) . y = a . (b . y)."""
    if a.n != b.n:
        raise DomainError("cannot compose elements of different dimension")
    return MoebiusElement(
        n=a.n, matrix=a.matrix @ b.matrix, generator_tag=GeneratorTag.COMPOSITE
    )


def inverse(a: MoebiusElement) -> MoebiusElement:
    """Lorentz inverse J M^T J (exact at the matrix level)."""
    j = _lorentz_metric(a.n)
    return MoebiusElement(
        n=a.n, matrix=j @ a.matrix.T @ j, generator_tag=a.generator_tag
    )


def random_moebius(
    rng: np.random.Generator, n: int, max_rapidity: float = 1.0
) -> MoebiusElement:
    """Rotation * boost * rotation with rapidity drawn up to the bound."""
    def random_rotation() -> MoebiusElement:
        gauss = rng.normal(size=(n + 1, n + 1))
        q, r = np.linalg.qr(gauss)
        q = q @ np.diag(np.sign(np.diag(r)))
        if np.linalg.det(q) < 0:
            q[:, 0] = -q[:, 0]
        return moebius_rotation_matrix(n, q)

    rap = float(rng.uniform(0.1, max_rapidity))
    direction = rng.normal(size=n + 1)
    boost = moebius_boost(n, direction, rap)
    return compose(random_rotation(), compose(boost, random_rotation()))


# ---------------------------------------------------------------------------
# Action, differential, conformal factor.
# ---------------------------------------------------------------------------


def act(a: MoebiusElement, y: np.ndarray) -> np.ndarray:
    """A . y = spatial part of M (y, 1) over its last coordinate."""
    return act_many(a, np.asarray(y, dtype=float)[None, :])[0]


def act_many(a: MoebiusElement, ys: np.ndarray) -> np.ndarray:
    ys = np.asarray(ys, dtype=float)
    w_s, w_t = _homogeneous(a, ys)
    return w_s / w_t[:, None]


def _homogeneous(a: MoebiusElement, ys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = a.n
    hom = np.concatenate([ys, np.ones((len(ys), 1))], axis=1)
    w = hom @ a.matrix.T
    w_t = w[:, n + 1]
    if np.min(np.abs(w_t)) < 1e-14:
        raise Degenerate("normalizing coordinate vanished under the action")
    return w[:, : n + 1], w_t


def differential(a: MoebiusElement, y: np.ndarray) -> np.ndarray:
    """Exact ambient Jacobian of the action at y (restricts to T_y S^n)."""
    return differential_many(a, np.asarray(y, dtype=float)[None, :])[0]


def differential_many(a: MoebiusElement, ys: np.ndarray) -> np.ndarray:
    """d phi(y) = S / w_t - phi(y) (x) m_row / w_t for M = [[S, b], [m, d]]."""
    n = a.n
    ys = np.asarray(ys, dtype=float)
    w_s, w_t = _homogeneous(a, ys)
    phi = w_s / w_t[:, None]
    s_block = a.matrix[: n + 1, : n + 1]
    m_row = a.matrix[n + 1, : n + 1]
    return (
        s_block[None, :, :] - phi[:, :, None] * m_row[None, None, :]
    ) / w_t[:, None, None]


def frame_at(y: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of T_y S^n as columns of an (n+1, n) matrix."""
    y = np.asarray(y, dtype=float)
    dim = len(y)
    anchor = int(np.argmax(np.abs(y)))
    cols = []
    basis = [y / np.linalg.norm(y)]
    for i in range(dim):
        if i == anchor:
            continue
        v = np.zeros(dim)
        v[i] = 1.0
        for b in basis:
            v = v - (v @ b) * b
        nrm = float(np.linalg.norm(v))
        if nrm < 1e-12:
            raise DomainError("degenerate frame construction")
        v /= nrm
        basis.append(v)
        cols.append(v)
    return np.stack(cols, axis=1)


def conformal_factor(a: MoebiusElement, y: np.ndarray) -> float:
    """Omega with (d phi)^T (d phi) = Omega^2 Id on T_y S^n; equals 1 / w_t."""
    return float(conformal_factor_many(a, np.asarray(y, dtype=float)[None, :])[0])


def conformal_factor_many(a: MoebiusElement, ys: np.ndarray) -> np.ndarray:
    _, w_t = _homogeneous(a, np.asarray(ys, dtype=float))
    if np.min(w_t) <= 0:
        raise Degenerate(
            "nonpositive normalizing coordinate: element outside the "
            "identity component"
        )
    return 1.0 / w_t


def conformality_residual(a: MoebiusElement, y: np.ndarray) -> float:
    """Relative deviation of the differential's Gram matrix from Omega^2 Id."""
    y = np.asarray(y, dtype=float)
    fr = frame_at(y)
    jf = differential(a, y) @ fr
    gram = jf.T @ jf
    omega2 = conformal_factor(a, y) ** 2
    dim = gram.shape[0]
    return float(np.max(np.abs(gram - omega2 * np.eye(dim))) / omega2)


def cocycle_residual(a: MoebiusElement, b: MoebiusElement, y: np.ndarray) -> float:
    """Relative residual of Omega_{ab}(y) = Omega_a(b . y) Omega_b(y)."""
    y = np.asarray(y, dtype=float)
    lhs = conformal_factor(compose(a, b), y)
    rhs = conformal_factor(a, act(b, y)) * conformal_factor(b, y)
    return abs(lhs - rhs) / abs(lhs)


# ---------------------------------------------------------------------------
# Quadrature grids.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SphereGrid:
    """Product quadrature nodes and weights on S^n (n = 2 or 3)."""

    n: int
    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def __post_init__(self) -> None:
        total = float(np.sum(self.weights))
        vol = sphere_volume(self.n)
        if abs(total - vol) > 1e-10 * vol:
            raise DomainError(
                f"weights sum {total!r} differs from vol(S^{self.n}) = {vol!r}"
            )

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(np.asarray(values, dtype=float), self.weights))


def sphere_grid(n: int, order: int = 40) -> SphereGrid:
    """Gauss-type product grid exact on spherical polynomials up to ``order``.

    S^2: Gauss-Legendre in cos(theta) x trapezoid in the azimuth.
    S^3: Gauss-Chebyshev (second kind, weight sin^2) in the polar angle x
         Gauss-Legendre x trapezoid.
    """
    if order < 2:
        raise DomainError("order must be >= 2")
    gl_nodes, gl_weights = np.polynomial.legendre.leggauss(order)
    n_phi = 2 * order + 1
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    w_phi = 2 * np.pi / n_phi
    cos_phi, sin_phi = np.cos(phi), np.sin(phi)
    if n == 2:
        u = gl_nodes[:, None]
        s = np.sqrt(1 - gl_nodes**2)[:, None]
        nodes = np.stack(
            [
                (s * cos_phi[None, :]).ravel(),
                (s * sin_phi[None, :]).ravel(),
                (u * np.ones_like(cos_phi)[None, :]).ravel(),
            ],
            axis=1,
        )
        weights = (gl_weights[:, None] * w_phi * np.ones(n_phi)[None, :]).ravel()
        return SphereGrid(n=2, nodes=nodes, weights=weights, order=order)
    if n == 3:
        m = order
        kk = np.arange(1, m + 1)
        theta1 = kk * np.pi / (m + 1)
        w1 = np.pi / (m + 1) * np.sin(theta1) ** 2
        cos1, sin1 = np.cos(theta1), np.sin(theta1)
        u2 = gl_nodes
        s2 = np.sqrt(1 - gl_nodes**2)
        # node = (sin t1 sin t2 cos p, sin t1 sin t2 sin p, sin t1 cos t2, cos t1)
        a = sin1[:, None, None] * s2[None, :, None] * cos_phi[None, None, :]
        b = sin1[:, None, None] * s2[None, :, None] * sin_phi[None, None, :]
        c = sin1[:, None, None] * u2[None, :, None] * np.ones(n_phi)[None, None, :]
        d = cos1[:, None, None] * np.ones((1, order, n_phi))
        nodes = np.stack([a.ravel(), b.ravel(), c.ravel(), d.ravel()], axis=1)
        weights = (
            w1[:, None, None] * gl_weights[None, :, None] * w_phi
            * np.ones(n_phi)[None, None, :]
        ).ravel()
        return SphereGrid(n=3, nodes=nodes, weights=weights, order=order)
    raise DomainError("grids implemented for n in {2, 3}")


def sphere_monomial_integral(exponents: Sequence[int]) -> float:
    """Exact integral of prod y_i^{a_i} over the unit sphere in R^{len(a)}.

    Zero unless every exponent is even; otherwise
    2 prod Gamma((a_i+1)/2) / Gamma((sum a_i + dim)/2).
    """
    alphas = list(exponents)
    if any(a < 0 for a in alphas):
        raise DomainError("exponents must be nonnegative")
    if any(a % 2 for a in alphas):
        return 0.0
    dim = len(alphas)
    num = 2.0
    for a in alphas:
        num *= math.gamma((a + 1) / 2)
    return num / math.gamma((sum(alphas) + dim) / 2)


# ---------------------------------------------------------------------------
# Tensor fields and the weighted pullback action.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RepWeight:
    """Conformal weight data (rho = n/2 always; nu the free parameter)."""

    n: int
    rho: Fraction
    nu: Fraction

    def __post_init__(self) -> None:
        if self.rho != Fraction(self.n, 2):
            raise DomainError("rho must equal n/2")

    @classmethod
    def of(cls, n: int, nu) -> "RepWeight":
        return cls(n=n, rho=Fraction(n, 2), nu=Fraction(nu))

    @property
    def pullback_exponent(self) -> float:
        """The power of Omega in u_nu: rho + nu - 2."""
        return float(self.rho + self.nu - 2)


def _tangent_projectors(ys: np.ndarray) -> np.ndarray:
    dim = ys.shape[1]
    return np.eye(dim)[None, :, :] - ys[:, :, None] * ys[:, None, :]


@dataclass(frozen=True)
class TensorField:
    """A symmetric two-tensor field on S^n, evaluated lazily and exactly.

    ``raw`` maps an (N, n+1) array of points to (N, n+1, n+1) ambient
    symmetric matrices; evaluation compresses them to the tangent space with
    P = Id - y y^T.  Because fields are closed-form (polynomial matrices or
    exact pullbacks thereof), they can be evaluated at arbitrary mapped
    points — no interpolation step exists to fail.
    """

    n: int
    raw: Callable[[np.ndarray], np.ndarray]

    def evaluate(self, ys: np.ndarray) -> np.ndarray:
        ys = np.asarray(ys, dtype=float)
        proj = _tangent_projectors(ys)
        return proj @ self.raw(ys) @ proj

    def sample(self, grid: SphereGrid) -> np.ndarray:
        return self.evaluate(grid.nodes)


def polynomial_tensor_field(
    n: int, constant: np.ndarray, linear: Sequence[np.ndarray] = (),
    quadratic: Sequence[tuple[int, int, np.ndarray]] = (),
) -> TensorField:
    """Field with ambient matrix C + sum_a y_a L_a + sum y_a y_b Q_{ab}."""
    dim = n + 1
    constant = 0.5 * (np.asarray(constant, float) + np.asarray(constant, float).T)
    linear = [0.5 * (np.asarray(m, float) + np.asarray(m, float).T) for m in linear]
    quadratic = [(a, b, 0.5 * (np.asarray(m, float) + np.asarray(m, float).T))
                 for a, b, m in quadratic]
    if constant.shape != (dim, dim) or any(m.shape != (dim, dim) for m in linear):
        raise DomainError(f"matrices must be {dim} x {dim}")

    def raw(ys: np.ndarray) -> np.ndarray:
        out = np.broadcast_to(constant, (len(ys), dim, dim)).copy()
        for a, mat in enumerate(linear):
            out += ys[:, a, None, None] * mat[None, :, :]
        for a, b, mat in quadratic:
            out += (ys[:, a] * ys[:, b])[:, None, None] * mat[None, :, :]
        return out

    return TensorField(n=n, raw=raw)


def metric_field(n: int) -> TensorField:
    """The round metric: ambient representation is the tangent projector."""
    dim = n + 1

    def raw(ys: np.ndarray) -> np.ndarray:
        return np.broadcast_to(np.eye(dim), (len(ys), dim, dim)).copy()

    return TensorField(n=n, raw=raw)


def random_band_limited_field(rng: np.random.Generator, n: int) -> TensorField:
    """Random low-degree polynomial field (degree <= 2 ambient entries)."""
    dim = n + 1
    constant = rng.normal(size=(dim, dim))
    linear = [rng.normal(size=(dim, dim)) for _ in range(dim)]
    pairs = [(int(a), int(b)) for a in range(dim) for b in range(a, dim)]
    picks = rng.choice(len(pairs), size=min(3, len(pairs)), replace=False)
    quadratic = [(pairs[i][0], pairs[i][1], rng.normal(size=(dim, dim))) for i in picks]
    return polynomial_tensor_field(n, constant, linear, quadratic)


def pullback_field(a: MoebiusElement, fld: TensorField) -> TensorField:
    """phi^* k with matrices J(y)^T k(phi y) J(y) (J the exact Jacobian)."""
    if a.n != fld.n:
        raise DomainError("dimension mismatch")

    def raw(ys: np.ndarray) -> np.ndarray:
        phi = act_many(a, ys)
        jac = differential_many(a, ys)
        values = fld.evaluate(phi)
        return np.einsum("nji,njk,nkl->nil", jac, values, jac)

    return TensorField(n=fld.n, raw=raw)


def u_action(w: RepWeight, a: MoebiusElement, fld: TensorField) -> TensorField:
    """u_nu(phi) k = Omega^{rho + nu - 2} phi^* k (a right action)."""
    if w.n != fld.n or a.n != fld.n:
        raise DomainError("dimension mismatch")
    pulled = pullback_field(a, fld)
    expo = w.pullback_exponent

    def raw(ys: np.ndarray) -> np.ndarray:
        omega = conformal_factor_many(a, ys)
        return omega[:, None, None] ** expo * pulled.raw(ys)

    return TensorField(n=fld.n, raw=raw)


def pairing(h: TensorField, k: TensorField, grid: SphereGrid) -> float:
    """Integral over S^n of the pointwise Frobenius pairing <h, k>."""
    hs, ks = h.sample(grid), k.sample(grid)
    return grid.integrate(np.einsum("nij,nij->n", hs, ks))


def check_pairing_invariance(
    h: TensorField, k: TensorField, a: MoebiusElement, grid: SphereGrid
) -> float:
    """Residual of <h, k> = <u_{-n/2}(phi) h, u_{n/2}(phi) k>."""
    n = grid.n
    base = pairing(h, k, grid)
    hw = u_action(RepWeight.of(n, Fraction(-n, 2)), a, h)
    kw = u_action(RepWeight.of(n, Fraction(n, 2)), a, k)
    moved = pairing(hw, kw, grid)
    return abs(base - moved)


# ---------------------------------------------------------------------------
# Stereographic chart: conformal Killing operator and covariance.
# ---------------------------------------------------------------------------


def chart_lambda(x: np.ndarray) -> float:
    """Round-metric conformal factor 2 / (1 + |x|^2) in the chart."""
    x = np.asarray(x, dtype=float)
    return 2.0 / (1.0 + float(x @ x))


class _PrimitiveKind(enum.Enum):
    TRANSLATION = "TRANSLATION"
    DILATION = "DILATION"
    ROTATION = "ROTATION"
    INVERSION = "INVERSION"


@dataclass(frozen=True)
class ChartPrimitive:
    """One conformal building block of R^n: x -> phi(x) with exact Jacobian."""

    kind: _PrimitiveKind
    vector: np.ndarray | None = None
    scale: float = 1.0
    rotation: np.ndarray | None = None

    def apply(self, x: np.ndarray) -> np.ndarray:
        if self.kind is _PrimitiveKind.TRANSLATION:
            return x + self.vector
        if self.kind is _PrimitiveKind.DILATION:
            return self.scale * x
        if self.kind is _PrimitiveKind.ROTATION:
            return self.rotation @ x
        r2 = float(x @ x)
        if r2 == 0.0:
            raise Degenerate("inversion applied at the origin")
        return x / r2

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        dim = len(x)
        if self.kind is _PrimitiveKind.TRANSLATION:
            return np.eye(dim)
        if self.kind is _PrimitiveKind.DILATION:
            return self.scale * np.eye(dim)
        if self.kind is _PrimitiveKind.ROTATION:
            return np.array(self.rotation, dtype=float)
        r2 = float(x @ x)
        if r2 == 0.0:
            raise Degenerate("inversion applied at the origin")
        return (np.eye(dim) - 2.0 * np.outer(x, x) / r2) / r2

    def mu(self, x: np.ndarray) -> float:
        """Flat conformal scale: J^T J = mu^2 Id."""
        if self.kind is _PrimitiveKind.DILATION:
            return abs(self.scale)
        if self.kind is _PrimitiveKind.INVERSION:
            r2 = float(x @ x)
            if r2 == 0.0:
                raise Degenerate("inversion applied at the origin")
            return 1.0 / r2
        return 1.0


@dataclass(frozen=True)
class ChartMap:
    """Composition of chart primitives (applied left to right)."""

    primitives: tuple[ChartPrimitive, ...]

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        for p in self.primitives:
            x = p.apply(x)
        return x

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        jac = np.eye(len(x))
        for p in self.primitives:
            jac = p.jacobian(x) @ jac
            x = p.apply(x)
        return jac

    def mu(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        out = 1.0
        for p in self.primitives:
            out *= p.mu(x)
            x = p.apply(x)
        return out

    def conformal_factor_round(self, x: np.ndarray) -> float:
        """Omega with phi^*(lambda^2 delta) = Omega^2 lambda^2 delta."""
        x = np.asarray(x, dtype=float)
        return self.mu(x) * chart_lambda(self.apply(x)) / chart_lambda(x)


def chart_translation(v) -> ChartMap:
    return ChartMap(
        (ChartPrimitive(_PrimitiveKind.TRANSLATION, vector=np.asarray(v, float)),)
    )


def chart_dilation(s: float) -> ChartMap:
    if s == 0:
        raise DomainError("dilation scale must be nonzero")
    return ChartMap((ChartPrimitive(_PrimitiveKind.DILATION, scale=float(s)),))


def chart_rotation(q) -> ChartMap:
    q = np.asarray(q, dtype=float)
    if np.max(np.abs(q.T @ q - np.eye(len(q)))) > 1e-12:
        raise DomainError("rotation matrix must be orthogonal")
    return ChartMap((ChartPrimitive(_PrimitiveKind.ROTATION, rotation=q),))


def chart_inversion() -> ChartMap:
    return ChartMap((ChartPrimitive(_PrimitiveKind.INVERSION),))


def compose_chart(*maps: ChartMap) -> ChartMap:
    """Apply the given maps in order (left first)."""
    prims: list[ChartPrimitive] = []
    for m in maps:
        prims.extend(m.primitives)
    return ChartMap(tuple(prims))


def random_chart_map(rng: np.random.Generator, n: int, max_log_scale: float = 1.0) -> ChartMap:
    """Dilation conjugated by rotations and translations (a chart Moebius map)."""
    gauss = rng.normal(size=(n, n))
    q, r = np.linalg.qr(gauss)
    q = q @ np.diag(np.sign(np.diag(r)))
    s = math.exp(float(rng.uniform(-max_log_scale, max_log_scale)))
    v = rng.normal(size=n) * 0.4
    return compose_chart(chart_translation(v), chart_rotation(q), chart_dilation(s))


def _field_jacobian(
    vec_field: Callable[[np.ndarray], np.ndarray],
    x: np.ndarray,
    step: float,
) -> np.ndarray:
    """4th-order central-difference Jacobian d_i X_j at x (rows i, cols j)."""
    dim = len(x)
    jac = np.zeros((dim, dim))
    for i in range(dim):
        e = np.zeros(dim)
        e[i] = step
        fp2 = np.asarray(vec_field(x + 2 * e), dtype=float)
        fp1 = np.asarray(vec_field(x + e), dtype=float)
        fm1 = np.asarray(vec_field(x - e), dtype=float)
        fm2 = np.asarray(vec_field(x - 2 * e), dtype=float)
        jac[i, :] = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * step)
    return jac


def ahlfors_chart(
    vec_field: Callable[[np.ndarray], np.ndarray],
    x: np.ndarray,
    step: float = 1e-5,
) -> np.ndarray:
    """Conformal Killing operator S X = L_X g - (2/n)(div_g X) g in the chart.

    g = lambda^2 delta with lambda = 2/(1+|x|^2), so with dX the derivative
    matrix (dX)_{ij} = d_i X_j,

        L_X g = (X . grad lambda^2) delta + lambda^2 (dX + dX^T),
        div_g X = div X + n (X . grad lambda) / lambda,
        grad lambda = -lambda^2 x.

    The output is trace free with respect to g.
    """
    x = np.asarray(x, dtype=float)
    dim = len(x)
    lam = chart_lambda(x)
    value = np.asarray(vec_field(x), dtype=float)
    dmat = _field_jacobian(vec_field, x, step)
    lie = (
        -2.0 * lam**3 * float(x @ value) * np.eye(dim)
        + lam**2 * (dmat + dmat.T)
    )
    div_g = float(np.trace(dmat)) - dim * lam * float(x @ value)
    return lie - (2.0 / dim) * div_g * lam**2 * np.eye(dim)


def inverse_stereographic(x: np.ndarray) -> np.ndarray:
    """Chart point to sphere point: (2x, 1 - |x|^2) / (1 + |x|^2)."""
    x = np.asarray(x, dtype=float)
    r2 = float(x @ x)
    return np.concatenate([2.0 * x, [1.0 - r2]]) / (1.0 + r2)


def stereographic(y: np.ndarray) -> np.ndarray:
    """Sphere point to chart point: y_s / (1 + y_t)."""
    y = np.asarray(y, dtype=float)
    t = y[-1]
    if abs(1.0 + t) < 1e-14:
        raise Degenerate("stereographic chart singular at the south pole")
    return y[:-1] / (1.0 + t)


def _stereographic_push(y: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Differential of the stereographic chart applied to tangent v at y."""
    t = y[-1]
    return v[:-1] / (1.0 + t) - y[:-1] * v[-1] / (1.0 + t) ** 2


def sphere_conformal_fields(n: int) -> list[Callable[[np.ndarray], np.ndarray]]:
    """Chart expressions of the (n+1)(n+2)/2 conformal fields of S^n.

    Rotation generators E_{ab} (y_a d_b - y_b d_a) and the conformal
    gradients grad(y_a) = e_a - y_a y, both pushed through the stereographic
    chart exactly.
    """
    fields: list[Callable[[np.ndarray], np.ndarray]] = []

    def rotation_field(aa: int, bb: int) -> Callable[[np.ndarray], np.ndarray]:
        def fld(x: np.ndarray) -> np.ndarray:
            y = inverse_stereographic(x)
            v = np.zeros(n + 1)
            v[bb] += y[aa]
            v[aa] -= y[bb]
            return _stereographic_push(y, v)

        return fld

    def gradient_field(aa: int) -> Callable[[np.ndarray], np.ndarray]:
        def fld(x: np.ndarray) -> np.ndarray:
            y = inverse_stereographic(x)
            v = -y[aa] * y
            v[aa] += 1.0
            return _stereographic_push(y, v)

        return fld

    for a in range(n + 1):
        for b in range(a + 1, n + 1):
            fields.append(rotation_field(a, b))
    for a in range(n + 1):
        fields.append(gradient_field(a))
    return fields


def check_ahlfors_covariance(
    vec_field: Callable[[np.ndarray], np.ndarray],
    phi: ChartMap,
    points: np.ndarray,
    step: float = 1e-5,
) -> float:
    """Max residual of Omega^{-2} phi^*(S X) = S(phi^* X) over the points.

    phi^*(two-tensor T)(x) = J^T T(phi x) J and
    (phi^* X)(x) = J^{-1} X(phi x), J the chart Jacobian at x.
    """

    def pulled_field(x: np.ndarray) -> np.ndarray:
        jac = phi.jacobian(x)
        return np.linalg.solve(jac, np.asarray(vec_field(phi.apply(x)), float))

    worst = 0.0
    for x in np.asarray(points, dtype=float):
        jac = phi.jacobian(x)
        omega = phi.conformal_factor_round(x)
        lhs = jac.T @ ahlfors_chart(vec_field, phi.apply(x), step=step) @ jac
        lhs /= omega**2
        rhs = ahlfors_chart(pulled_field, x, step=step)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst
