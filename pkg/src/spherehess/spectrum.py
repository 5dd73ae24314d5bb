"""Eigenvalue bookkeeping for the universal second-variation operator.

Every conformal functional on the round n-sphere has, at its critical point,
a second variation acting as a scalar on each tensor mode ``(2+j, q)``.  The
scalars obey a two-term recursion in the Casimir-type quantity ``kappa``:
stepping from mode ``beta`` to an adjacent mode ``gamma``,

    mu_gamma * (d - n) = mu_beta * (d + n),      d = kappa(gamma) - kappa(beta)

(after clearing the half-integer shift ``nu = n/2``).  Propagating this
relation over the whole mode lattice pins the full table up to one overall
scale (two scales on the 3-sphere, whose mode lattice carries a sign), and
the closed form is a product of two rising factorials.  This module builds
the table both ways and classifies the resulting quadratic form.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    DomainError,
    InconsistentSystem,
    InvalidStep,
    NotAdjacent,
)
from .exact import rising
from .ktypes import KType

__all__ = [
    "StepDirection",
    "kappa",
    "kappa_inner_product",
    "kappa_step",
    "transition_coeff",
    "SpectrumTable",
    "spectrum_generate",
    "spectrum_generate3",
    "t0_eigenvalue",
    "closed_form_table",
    "recursion_matches_closed_form",
    "HessianKind",
    "Classification",
    "classify_hessian",
]


def kappa(t: KType) -> int:
    """Casimir-type number of the mode: (n+j+1)(j+2) + q(n+q-3)."""
    n, j, q = t.dim_n, t.j, t.q
    return (n + j + 1) * (j + 2) + q * (n + q - 3)


def kappa_inner_product(t: KType) -> int:
    """Independent evaluation of kappa as <beta + 2 rho, beta>.

    ``beta = (2+j, q, 0, ...)`` is the highest weight of SO(n+1) and
    ``2 rho = (n-1, n-3, ...)`` twice the half-sum of its positive roots.
    Must agree with :func:`kappa` for every valid mode.
    """
    n = t.dim_n
    beta = t.weight.entries
    two_rho = tuple(n - 1 - 2 * i for i in range(len(beta)))
    return sum(b * (b + r) for b, r in zip(beta, two_rho))


class StepDirection(enum.Enum):
    J_UP = "J_UP"
    Q_UP = "Q_UP"


def _stepped(t: KType, direction: StepDirection) -> KType:
    if direction is StepDirection.J_UP:
        target = (t.j + 1, t.q)
    else:
        target = (t.j, t.q + 1)
    try:
        return KType(dim_n=t.dim_n, j=target[0], q=target[1])
    except DomainError as exc:
        raise InvalidStep(
            f"stepping {direction.value} from (j={t.j}, q={t.q}) leaves the "
            f"admissible range for dim_n={t.dim_n}"
        ) from exc


def kappa_step(t: KType, direction: StepDirection) -> int:
    """kappa increment of a unit step: n+2j+4 along j, n+2q-2 along q.

    Computed as the difference of two kappa evaluations and checked against
    the closed-form increment.
    """
    target = _stepped(t, direction)
    diff = kappa(target) - kappa(t)
    if direction is StepDirection.J_UP:
        closed = t.dim_n + 2 * t.j + 4
    else:
        closed = t.dim_n + 2 * t.q - 2
    if diff != closed:
        raise InconsistentSystem(
            f"kappa step mismatch at {t}: difference {diff}, closed {closed}"
        )
    return diff


def transition_coeff(beta: KType, gamma: KType, nu: Fraction) -> Fraction:
    """The coefficient (kappa_gamma - kappa_beta + 2 nu) / 2 of an edge.

    ``gamma`` must differ from ``beta`` by exactly one unit step in j or q.
    """
    if gamma.dim_n != beta.dim_n:
        raise NotAdjacent("modes live on spheres of different dimension")
    dj, dq = gamma.j - beta.j, gamma.q - beta.q
    if sorted((abs(dj), abs(dq))) != [0, 1]:
        raise NotAdjacent(f"modes (j={beta.j},q={beta.q}) and (j={gamma.j},q={gamma.q}) are not adjacent")
    return Fraction(kappa(gamma) - kappa(beta), 2) + Fraction(nu)


@dataclass
class SpectrumTable:
    """Eigenvalue table of the universal second variation on a mode lattice."""

    dim_n: int
    entries: dict[KType, Fraction]
    normalization_base: KType
    free_scale_note: str

    def value(self, j: int, q: int) -> Fraction:
        key = KType(dim_n=self.dim_n, j=j, q=q)
        if key not in self.entries:
            raise DomainError(f"mode (j={j}, q={q}) is outside the tabulated lattice")
        return self.entries[key]


@dataclass
class _EdgeSystem:
    """Propagates mu_gamma (d - 2 nu) = mu_beta (d + 2 nu) over a lattice."""

    nu: Fraction
    values: dict[KType, Fraction] = field(default_factory=dict)

    def edge_factors(self, beta: KType, gamma: KType) -> tuple[Fraction, Fraction]:
        d = kappa(gamma) - kappa(beta)
        return d - 2 * self.nu, d + 2 * self.nu

    def propagate(self, edges: list[tuple[KType, KType]]) -> None:
        changed = True
        while changed:
            changed = False
            for beta, gamma in edges:
                changed |= self._apply(beta, gamma)

    def _set(self, node: KType, value: Fraction) -> bool:
        old = self.values.get(node)
        if old is None:
            self.values[node] = value
            return True
        if old != value:
            raise InconsistentSystem(
                f"conflicting values {old} and {value} at (j={node.j}, q={node.q})"
            )
        return False

    def _apply(self, beta: KType, gamma: KType) -> bool:
        lo, hi = self.edge_factors(beta, gamma)
        mu_b, mu_g = self.values.get(beta), self.values.get(gamma)
        changed = False
        # Relation: mu_gamma * lo == mu_beta * hi.
        if lo == 0 and hi != 0:
            # Degenerate edge: the relation reads 0 == mu_beta * hi.
            changed |= self._set(beta, Fraction(0))
        elif hi == 0 and lo != 0:
            changed |= self._set(gamma, Fraction(0))
        elif lo != 0 and hi != 0:
            if mu_b is not None:
                changed |= self._set(gamma, mu_b * hi / lo)
            elif mu_g is not None:
                changed |= self._set(beta, mu_g * lo / hi)
        return changed

    def check_all(self, edges: list[tuple[KType, KType]]) -> None:
        for beta, gamma in edges:
            lo, hi = self.edge_factors(beta, gamma)
            if self.values[gamma] * lo != self.values[beta] * hi:
                raise InconsistentSystem(
                    f"edge relation violated between (j={beta.j}, q={beta.q}) "
                    f"and (j={gamma.j}, q={gamma.q})"
                )


def _lattice_edges(
    n: int, j_max: int, q_range: tuple[int, ...]
) -> tuple[list[KType], list[tuple[KType, KType]]]:
    nodes = [
        KType(dim_n=n, j=j, q=q) for j in range(j_max + 1) for q in q_range
    ]
    edges: list[tuple[KType, KType]] = []
    for j in range(j_max + 1):
        for q in q_range:
            if j + 1 <= j_max:
                edges.append(
                    (KType(dim_n=n, j=j, q=q), KType(dim_n=n, j=j + 1, q=q))
                )
            if q + 1 in q_range:
                edges.append(
                    (KType(dim_n=n, j=j, q=q), KType(dim_n=n, j=j, q=q + 1))
                )
    return nodes, edges


def spectrum_generate(n: int, j_max: int, base_value: Fraction) -> SpectrumTable:
    """Solve the recursion on the mode lattice of an n-sphere, n >= 4.

    ``base_value`` seeds the mode (j=0, q=2); zeros at q in {0, 1} are forced
    by the degenerate edges, and after propagation every edge relation is
    re-checked exactly.
    """
    if n < 4:
        raise DomainError("use spectrum_generate3 for the 3-sphere")
    if j_max < 0:
        raise DomainError("j_max must be >= 0")
    base = KType(dim_n=n, j=0, q=2)
    system = _EdgeSystem(nu=Fraction(n, 2))
    system.values[base] = Fraction(base_value)
    nodes, edges = _lattice_edges(n, j_max, (0, 1, 2))
    system.propagate(edges)
    missing = [t for t in nodes if t not in system.values]
    if missing:
        raise InconsistentSystem(f"unreached modes: {missing}")
    system.check_all(edges)
    return SpectrumTable(
        dim_n=n,
        entries=dict(system.values),
        normalization_base=base,
        free_scale_note=(
            "one free overall scale, fixed by the value at (j=0, q=2)"
        ),
    )


def spectrum_generate3(
    j_max: int,
    base_value_plus: Fraction,
    base_value_minus: Fraction,
) -> SpectrumTable:
    """Solve the recursion on the five-branch mode lattice of the 3-sphere.

    The lattice q in {-2,...,2} decouples into a q=2 branch, a q=-2 branch,
    and a forced-zero middle band q in {-1, 0, 1}, so two independent scales
    remain; they seed (0, 2) and (0, -2).
    """
    if j_max < 0:
        raise DomainError("j_max must be >= 0")
    n = 3
    base = KType(dim_n=n, j=0, q=2)
    base_minus = KType(dim_n=n, j=0, q=-2)
    system = _EdgeSystem(nu=Fraction(n, 2))
    system.values[base] = Fraction(base_value_plus)
    system.values[base_minus] = Fraction(base_value_minus)
    nodes, edges = _lattice_edges(n, j_max, (-2, -1, 0, 1, 2))
    system.propagate(edges)
    missing = [t for t in nodes if t not in system.values]
    if missing:
        raise InconsistentSystem(f"unreached modes: {missing}")
    system.check_all(edges)
    return SpectrumTable(
        dim_n=n,
        entries=dict(system.values),
        normalization_base=base,
        free_scale_note=(
            "two free scales on the 3-sphere, fixed by the values at "
            "(j=0, q=2) and (j=0, q=-2)"
        ),
    )


def t0_eigenvalue(t: KType) -> Fraction:
    """Closed-form eigenvalue rising(j+2, n) * rising(q-1, n), exact.

    The second factor crosses zero precisely for q in {0, 1}; on the
    3-sphere it is negative at q = -2 and positive at q = 2.
    """
    n = t.dim_n
    return rising(t.j + 2, n) * rising(t.q - 1, n)


def closed_form_table(n: int, j_max: int) -> SpectrumTable:
    """The closed-form eigenvalue table over the full mode lattice."""
    q_range = (-2, -1, 0, 1, 2) if n == 3 else (0, 1, 2)
    entries = {
        t: t0_eigenvalue(t)
        for j in range(j_max + 1)
        for q in q_range
        for t in (KType(dim_n=n, j=j, q=q),)
    }
    return SpectrumTable(
        dim_n=n,
        entries=entries,
        normalization_base=KType(dim_n=n, j=0, q=2),
        free_scale_note="closed form; scale pinned by the rising factorials",
    )


def recursion_matches_closed_form(n: int, j_max: int) -> bool:
    """Exact pointwise equality of the recursion table with the closed form."""
    closed = closed_form_table(n, j_max)
    if n == 3:
        plus = t0_eigenvalue(KType(dim_n=3, j=0, q=2))
        minus = t0_eigenvalue(KType(dim_n=3, j=0, q=-2))
        generated = spectrum_generate3(j_max, plus, minus)
    else:
        generated = spectrum_generate(
            n, j_max, t0_eigenvalue(KType(dim_n=n, j=0, q=2))
        )
    return generated.entries == closed.entries


class HessianKind(enum.Enum):
    POSITIVE_SEMIDEFINITE = "POSITIVE_SEMIDEFINITE"
    NEGATIVE_SEMIDEFINITE = "NEGATIVE_SEMIDEFINITE"
    INDEFINITE = "INDEFINITE"
    ZERO = "ZERO"


_KERNEL_NOTE = (
    "modes with q in {0, 1} (the gauge directions, i.e. the image of the "
    "conformal Killing operator) plus the conformal directions"
)
_KERNEL_NOTE_3 = (
    "modes with q in {-1, 0, 1} (the gauge directions, i.e. the image of "
    "the conformal Killing operator) plus the conformal directions"
)


@dataclass(frozen=True)
class Classification:
    kind: HessianKind
    kernel_description: str


def classify_hessian(
    n: int,
    c: Fraction | int | tuple[Fraction | int, Fraction | int],
) -> Classification:
    """Definiteness of c * (eigenvalue table) as a quadratic form.

    For n >= 4 a single scale ``c`` decides everything by its sign.  On the
    3-sphere a pair ``(c_plus, c_minus)`` scales the two branches; the form
    is semidefinite exactly when the two products with the branch signs
    (+ at q=2, - at q=-2) agree.
    """
    if n < 3:
        raise DomainError(f"n must be >= 3, got {n}")
    if n == 3:
        if not isinstance(c, tuple):
            raise DomainError("the 3-sphere needs a pair (c_plus, c_minus)")
        c_plus, c_minus = (Fraction(x) for x in c)
        # Nonzero eigenvalues have the sign of the branch: +1 at q=2 and
        # -1 at q=-2, so the form's values have signs (c_plus, -c_minus).
        signs = {x for x in (c_plus, -c_minus) if x != 0}
        kernel = _KERNEL_NOTE_3
        if not signs:
            return Classification(HessianKind.ZERO, "every mode")
        if any(x > 0 for x in signs) and any(x < 0 for x in signs):
            return Classification(HessianKind.INDEFINITE, kernel)
        if all(x > 0 for x in signs):
            return Classification(HessianKind.POSITIVE_SEMIDEFINITE, kernel)
        return Classification(HessianKind.NEGATIVE_SEMIDEFINITE, kernel)
    if isinstance(c, tuple):
        raise DomainError("a single scale decides the form for n >= 4")
    scale = Fraction(c)
    if scale == 0:
        return Classification(HessianKind.ZERO, "every mode")
    if scale > 0:
        return Classification(HessianKind.POSITIVE_SEMIDEFINITE, _KERNEL_NOTE)
    return Classification(HessianKind.NEGATIVE_SEMIDEFINITE, _KERNEL_NOTE)
