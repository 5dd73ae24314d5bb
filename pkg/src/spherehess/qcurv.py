"""Exact leading-symbol calculus for linearized curvature quantities.

Everything here is flat-background, leading-order, and exact: tensors are
tuples of `Fraction`s and the single derivative convention sigma(d_j) = i xi_j
is fixed once, giving

    sigma(Laplacian)   = -|xi|^2            (scalar)
    sigma(Hessian)_ij  = -xi_i xi_j         (matrix)
    sigma(div div k)   = -xi^T k xi.

Composed through the linearized scalar curvature, Schouten-type tensor and
the critical-order obstruction tensor, the n-th order Hessian of the total
Q-type curvature functional comes out as exactly -|xi|^n / 4 times the
trace-free transverse perturbation, which is the end-to-end identity this
module exists to verify.  The conformal Killing (Ahlfors) operator's symbol
and its adjoint identity are included since its range spans the gauge
directions that the Hessian kills.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DomainError,
    ParityError,
    PreconditionViolation,
    ZeroCovector,
)

__all__ = [
    "FracVec",
    "FracMat",
    "SymbolValue",
    "as_vector",
    "as_matrix",
    "identity",
    "mat_add",
    "mat_scale",
    "outer",
    "mat_trace",
    "mat_apply",
    "mat_mul",
    "frobenius",
    "xi_norm_sq",
    "laplacian_symbol",
    "hessian_symbol",
    "lin_scalar_symbol",
    "lin_ricci_symbol",
    "lin_schouten_symbol",
    "lin_schouten_from_ricci",
    "lin_obstruction_symbol",
    "lin_obstruction_symbol_direct",
    "q_hessian_symbol",
    "q_hessian_expected",
    "ahlfors_symbol",
    "project_tt",
]

FracVec = tuple[Fraction, ...]
FracMat = tuple[tuple[Fraction, ...], ...]


def as_vector(entries) -> FracVec:
    return tuple(Fraction(e) for e in entries)


def as_matrix(rows) -> FracMat:
    mat = tuple(tuple(Fraction(e) for e in row) for row in rows)
    size = len(mat)
    if any(len(row) != size for row in mat):
        raise DomainError("matrix must be square")
    return mat


def identity(n: int) -> FracMat:
    return tuple(
        tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
    )


def mat_add(*mats: FracMat) -> FracMat:
    size = len(mats[0])
    return tuple(
        tuple(sum((m[i][j] for m in mats), Fraction(0)) for j in range(size))
        for i in range(size)
    )


def mat_scale(c: Fraction, m: FracMat) -> FracMat:
    c = Fraction(c)
    return tuple(tuple(c * e for e in row) for row in m)


def outer(u: FracVec, v: FracVec) -> FracMat:
    return tuple(tuple(ui * vj for vj in v) for ui in u)


def mat_trace(m: FracMat) -> Fraction:
    return sum((m[i][i] for i in range(len(m))), Fraction(0))


def mat_apply(m: FracMat, v: FracVec) -> FracVec:
    return tuple(
        sum((m[i][j] * v[j] for j in range(len(v))), Fraction(0))
        for i in range(len(m))
    )


def mat_mul(a: FracMat, b: FracMat) -> FracMat:
    size = len(a)
    return tuple(
        tuple(
            sum((a[i][t] * b[t][j] for t in range(size)), Fraction(0))
            for j in range(size)
        )
        for i in range(size)
    )


def frobenius(a: FracMat, b: FracMat) -> Fraction:
    return sum(
        (a[i][j] * b[i][j] for i in range(len(a)) for j in range(len(a))),
        Fraction(0),
    )


def _check_symmetric(m: FracMat) -> None:
    size = len(m)
    for i in range(size):
        for j in range(i):
            if m[i][j] != m[j][i]:
                raise DomainError("matrix must be symmetric")


@dataclass(frozen=True)
class SymbolValue:
    """An exact leading-symbol value at frequency xi: scalar or symmetric matrix."""

    n: int
    xi: FracVec
    value: Fraction | FracMat

    def __post_init__(self) -> None:
        if len(self.xi) != self.n:
            raise DomainError("xi must have length n")
        if self.is_matrix:
            if len(self.value) != self.n:  # type: ignore[arg-type]
                raise DomainError("matrix value must be n x n")
            _check_symmetric(self.value)  # type: ignore[arg-type]

    @property
    def is_matrix(self) -> bool:
        return not isinstance(self.value, Fraction)


def xi_norm_sq(xi: FracVec) -> Fraction:
    return sum((x * x for x in xi), Fraction(0))


def laplacian_symbol(xi: FracVec) -> Fraction:
    """sigma(Laplacian) = -|xi|^2 — the one place the sign convention lives."""
    return -xi_norm_sq(xi)


def hessian_symbol(xi: FracVec) -> FracMat:
    """sigma(second covariant derivative)_ij = -xi_i xi_j."""
    return mat_scale(Fraction(-1), outer(xi, xi))


def _validated(n: int, xi, k) -> tuple[FracVec, FracMat]:
    if n < 3:
        raise DomainError(f"n must be >= 3, got {n}")
    xi_v = as_vector(xi)
    k_m = as_matrix(k)
    if len(xi_v) != n or len(k_m) != n:
        raise DomainError("xi and k must have size n")
    _check_symmetric(k_m)
    return xi_v, k_m


def _require_tt(xi: FracVec, k: FracMat) -> None:
    if mat_trace(k) != 0:
        raise PreconditionViolation("k must be trace free")
    if any(c != 0 for c in mat_apply(k, xi)):
        raise PreconditionViolation("k must be transverse (k xi = 0)")


def lin_scalar_symbol(n: int, xi, k) -> SymbolValue:
    """Leading symbol of the linearized scalar curvature: div div k - Lap tr k.

    Equals -xi^T k xi + |xi|^2 tr k; vanishes identically on trace-free
    transverse perturbations.
    """
    xi_v, k_m = _validated(n, xi, k)
    div_div = -sum(
        (xi_v[i] * k_m[i][j] * xi_v[j] for i in range(n) for j in range(n)),
        Fraction(0),
    )
    lap_tr = laplacian_symbol(xi_v) * mat_trace(k_m)
    return SymbolValue(n=n, xi=xi_v, value=div_div - lap_tr)


def lin_ricci_symbol(n: int, xi, k) -> SymbolValue:
    """Leading symbol of the linearized Ricci tensor (no gauge conditions).

    (1/2) [ |xi|^2 k - xi (k xi)^T - (k xi) xi^T + (tr k) xi xi^T ]; on
    trace-free transverse input this collapses to |xi|^2 k / 2.
    """
    xi_v, k_m = _validated(n, xi, k)
    kxi = mat_apply(k_m, xi_v)
    value = mat_scale(
        Fraction(1, 2),
        mat_add(
            mat_scale(xi_norm_sq(xi_v), k_m),
            mat_scale(Fraction(-1), outer(xi_v, kxi)),
            mat_scale(Fraction(-1), outer(kxi, xi_v)),
            mat_scale(mat_trace(k_m), outer(xi_v, xi_v)),
        ),
    )
    return SymbolValue(n=n, xi=xi_v, value=value)


def lin_schouten_symbol(n: int, xi, k) -> SymbolValue:
    """Leading symbol of the linearized Schouten-type tensor on TT input.

    -(1/(2(n-2))) sigma(Laplacian) k = +|xi|^2 k / (2(n-2)).
    """
    xi_v, k_m = _validated(n, xi, k)
    _require_tt(xi_v, k_m)
    scale = -Fraction(1, 2 * (n - 2)) * laplacian_symbol(xi_v)
    return SymbolValue(n=n, xi=xi_v, value=mat_scale(scale, k_m))


def lin_schouten_from_ricci(n: int, xi, k) -> SymbolValue:
    """Schouten symbol assembled from the full Ricci symbol (dual route).

    (1/(n-2)) [ sigma(lin Ricci) - (1/(2(n-1))) sigma(lin Scal) * delta ];
    must agree with :func:`lin_schouten_symbol` on trace-free transverse
    input, where the extra terms cancel.
    """
    xi_v, k_m = _validated(n, xi, k)
    ricci = lin_ricci_symbol(n, xi_v, k_m).value
    scal = lin_scalar_symbol(n, xi_v, k_m).value
    value = mat_scale(
        Fraction(1, n - 2),
        mat_add(
            ricci,  # type: ignore[arg-type]
            mat_scale(-Fraction(1, 2 * (n - 1)) * scal, identity(n)),
        ),
    )
    return SymbolValue(n=n, xi=xi_v, value=value)


def _check_even(n: int) -> None:
    if n % 2 == 1:
        raise ParityError(f"n must be even, got {n}")
    if n < 4:
        raise DomainError(f"n must be >= 4, got {n}")


def lin_obstruction_symbol(n: int, xi, k) -> SymbolValue:
    """Leading symbol of the linearized obstruction tensor, assembled.

    sigma(Laplacian)^{n/2-2} [ sigma(Laplacian) sigma(lin Schouten)
        - (1/(2(n-1))) sigma(Hessian) sigma(lin Scal) ]
    on trace-free transverse input; the scalar-curvature term vanishes there
    and the result is (-1)^{n/2+1} |xi|^n / (2(n-2)) times k.
    """
    _check_even(n)
    xi_v, k_m = _validated(n, xi, k)
    _require_tt(xi_v, k_m)
    lap = laplacian_symbol(xi_v)
    schouten = lin_schouten_symbol(n, xi_v, k_m).value
    scal = lin_scalar_symbol(n, xi_v, k_m).value
    inner = mat_add(
        mat_scale(lap, schouten),  # type: ignore[arg-type]
        mat_scale(-Fraction(1, 2 * (n - 1)) * scal, hessian_symbol(xi_v)),
    )
    value = mat_scale(lap ** (n // 2 - 2), inner)
    return SymbolValue(n=n, xi=xi_v, value=value)


def lin_obstruction_symbol_direct(n: int, xi, k) -> SymbolValue:
    """Direct route: -(1/(2(n-2))) sigma(Laplacian)^{n/2} k."""
    _check_even(n)
    xi_v, k_m = _validated(n, xi, k)
    _require_tt(xi_v, k_m)
    scale = -Fraction(1, 2 * (n - 2)) * laplacian_symbol(xi_v) ** (n // 2)
    return SymbolValue(n=n, xi=xi_v, value=mat_scale(scale, k_m))


def q_hessian_symbol(n: int, xi, k) -> SymbolValue:
    """n-th order Hessian symbol of the total Q-type curvature functional.

    (-1)^{n/2} ((n-2)/2) times the obstruction symbol; on trace-free
    transverse input this is exactly -|xi|^n / 4 times k.
    """
    _check_even(n)
    obstruction = lin_obstruction_symbol(n, xi, k)
    factor = Fraction((-1) ** (n // 2) * (n - 2), 2)
    return SymbolValue(
        n=n,
        xi=obstruction.xi,
        value=mat_scale(factor, obstruction.value),  # type: ignore[arg-type]
    )


def q_hessian_expected(n: int, xi, k) -> SymbolValue:
    """The closed form -|xi|^n / 4 times k (comparison target)."""
    _check_even(n)
    xi_v, k_m = _validated(n, xi, k)
    scale = -Fraction(1, 4) * xi_norm_sq(xi_v) ** (n // 2)
    return SymbolValue(n=n, xi=xi_v, value=mat_scale(scale, k_m))


def ahlfors_symbol(n: int, xi, vec) -> SymbolValue:
    """Leading symbol of the conformal Killing operator on a vector.

    xi (x) X + X (x) xi - (2/n) (xi . X) Id; trace free by construction and
    adjoint to twice the divergence: <ahlfors_symbol(xi, X), k> = <X, 2 k xi>
    for every trace-free symmetric k.
    """
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    xi_v = as_vector(xi)
    x_v = as_vector(vec)
    if len(xi_v) != n or len(x_v) != n:
        raise DomainError("xi and X must have length n")
    dot = sum((a * b for a, b in zip(xi_v, x_v)), Fraction(0))
    value = mat_add(
        outer(xi_v, x_v),
        outer(x_v, xi_v),
        mat_scale(-Fraction(2, n) * dot, identity(n)),
    )
    return SymbolValue(n=n, xi=xi_v, value=value)


def project_tt(xi, m) -> FracMat:
    """Exact trace-free transverse compression of a symmetric matrix.

    P m P - (tr(P m P)/(n-1)) P with P the projector normal to xi; the
    result is symmetric, annihilates xi, and is trace free.
    """
    xi_v = as_vector(xi)
    m_m = as_matrix(m)
    _check_symmetric(m_m)
    n = len(xi_v)
    nrm2 = xi_norm_sq(xi_v)
    if nrm2 == 0:
        raise ZeroCovector("xi must be nonzero")
    proj = mat_add(identity(n), mat_scale(-1 / nrm2, outer(xi_v, xi_v)))
    pmp = mat_mul(proj, mat_mul(m_m, proj))
    return mat_add(pmp, mat_scale(-mat_trace(pmp) / (n - 1), proj))
