"""Highest-weight bookkeeping for the rotation groups acting on a round sphere.

Irreducible representations of SO(N) are labeled by weakly decreasing integer
tuples of length floor(N/2); when N is even the last entry may be negative.
Restriction from SO(n+1) to SO(n) is multiplicity free and governed by an
interlacing condition between the two weight vectors.  The tensor modes that
matter for second variations on the n-sphere sit in two-parameter families of
such weights, which this module enumerates both directly and by brute force.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import DomainError, RankMismatch, UnsupportedSigma

__all__ = [
    "DominantWeight",
    "KType",
    "is_dominant",
    "branches",
    "enumerate_bundle_ktypes",
    "enumerate_bundle_ktypes3",
    "bundle_ktypes_bruteforce",
    "dominant_weights_upto",
]


@dataclass(frozen=True)
class DominantWeight:
    """A dominant integral weight of SO(group_rank).

    ``entries`` has length floor(group_rank / 2).  For odd ``group_rank`` all
    entries are nonnegative; for even ``group_rank`` the final entry may be
    negative (the two spin orientations), bounded by the preceding entry.
    """

    entries: tuple[int, ...]
    group_rank: int

    def __post_init__(self) -> None:
        if self.group_rank < 2:
            raise DomainError(f"group rank must be >= 2, got {self.group_rank}")
        if len(self.entries) != self.group_rank // 2:
            raise DomainError(
                f"weight for SO({self.group_rank}) needs {self.group_rank // 2} "
                f"entries, got {len(self.entries)}"
            )
        if any(not isinstance(e, int) for e in self.entries):
            raise DomainError("weight entries must be integers")

    @property
    def rank(self) -> int:
        return len(self.entries)


def _weight(entries: tuple[int, ...], group_rank: int) -> DominantWeight:
    return DominantWeight(entries=tuple(entries), group_rank=group_rank)


def pad_weight(head: tuple[int, ...], group_rank: int) -> DominantWeight:
    """Extend ``head`` with zeros to a full weight vector for SO(group_rank)."""
    rank = group_rank // 2
    if len(head) > rank:
        raise DomainError(f"{head} has more than {rank} entries")
    return _weight(tuple(head) + (0,) * (rank - len(head)), group_rank)


def is_dominant(w: DominantWeight) -> bool:
    """True iff ``w`` satisfies the dominance (weak decrease + parity) rules."""
    e = w.entries
    if w.group_rank % 2 == 1:
        return all(e[i] >= e[i + 1] for i in range(len(e) - 1)) and (
            not e or e[-1] >= 0
        )
    # Even group rank: all comparisons except the last use the plain entry;
    # the final entry participates through its absolute value.
    if len(e) == 1:
        return True
    if any(e[i] < e[i + 1] for i in range(len(e) - 2)):
        return False
    return e[-2] >= abs(e[-1])


def branches(beta: DominantWeight, sigma: DominantWeight) -> bool:
    """True iff ``sigma`` occurs in the restriction of ``beta`` one rank down.

    ``beta`` is a weight of SO(N), ``sigma`` of SO(N-1); the branching is
    multiplicity free and holds iff the two weight vectors interlace.
    """
    if beta.group_rank != sigma.group_rank + 1:
        raise RankMismatch(
            f"restriction needs adjacent group ranks, got SO({beta.group_rank}) "
            f"and SO({sigma.group_rank})"
        )
    if not (is_dominant(beta) and is_dominant(sigma)):
        return False
    b, s = beta.entries, sigma.entries
    if beta.group_rank % 2 == 1:
        # SO(2m+1) -> SO(2m), both rank m: b1 >= s1 >= b2 >= ... >= bm >= |sm|
        m = len(b)
        for i in range(m - 1):
            if not (b[i] >= s[i] >= b[i + 1]):
                return False
        return b[m - 1] >= abs(s[m - 1])
    # SO(2m) -> SO(2m-1), ranks m and m-1:
    # b1 >= s1 >= b2 >= s2 >= ... >= s_{m-1} >= |bm|
    m = len(b)
    for i in range(m - 1):
        if not b[i] >= s[i]:
            return False
        if i + 1 < m - 1 and not s[i] >= b[i + 1]:
            return False
    if m >= 2 and not s[m - 2] >= abs(b[m - 1]):
        return False
    return True


@dataclass(frozen=True)
class KType:
    """A two-parameter tensor mode (2+j, q) of SO(n+1) acting on the n-sphere.

    ``j >= 0`` indexes the polynomial degree direction; ``q`` the second
    weight entry.  For ``dim_n >= 4`` only ``q`` in {0, 1, 2} occurs; for
    ``dim_n == 3`` the group SO(4) has rank two and the mirror values
    ``q`` in {-2, -1} appear as well.
    """

    dim_n: int
    j: int
    q: int

    def __post_init__(self) -> None:
        if self.dim_n < 3:
            raise DomainError(f"dim_n must be >= 3, got {self.dim_n}")
        if self.j < 0:
            raise DomainError(f"j must be >= 0, got {self.j}")
        valid_q = range(-2, 3) if self.dim_n == 3 else range(0, 3)
        if self.q not in valid_q:
            raise DomainError(
                f"q={self.q} invalid for dim_n={self.dim_n} "
                f"(allowed: {list(valid_q)})"
            )

    @property
    def weight(self) -> DominantWeight:
        """The highest weight (2+j, q, 0, ...) of SO(dim_n + 1)."""
        return pad_weight((2 + self.j, self.q), self.dim_n + 1)


def enumerate_bundle_ktypes(
    sigma: DominantWeight, n: int, j_max: int
) -> list[KType]:
    """All K-types of the bundle labeled by ``sigma`` with first entry bounded.

    ``sigma`` must be the SO(n)-weight (1, 0, ...) or (2, 0, ...).  For
    sigma = (2,...): the family {(2+j, q) : 0 <= j <= j_max, q in {0,1,2}}.
    For sigma = (1,...): the family {(1+l, r) : 0 <= l <= j_max, r in {0,1}},
    encoded as KType(j=l-1, q=r) only where the (2+j, q) labeling applies;
    the list is returned as raw weights via :func:`bundle_weights`.

    Only n >= 4 is handled here; use :func:`enumerate_bundle_ktypes3` for the
    five-branch situation on the 3-sphere.
    """
    if n < 4:
        raise DomainError("use enumerate_bundle_ktypes3 for n = 3")
    head = _sigma_head(sigma, n)
    if head == (2,):
        return [
            KType(dim_n=n, j=j, q=q)
            for j in range(j_max + 1)
            for q in (0, 1, 2)
        ]
    raise UnsupportedSigma(
        f"sigma with leading entries {head} is not one of the supported "
        "bundles (only (2, 0, ...) yields KType objects; "
        "use bundle_weights for (1, 0, ...))"
    )


def bundle_weights(
    sigma: DominantWeight, n: int, first_max: int
) -> set[tuple[int, int]]:
    """Leading two weight entries (a, b) of all SO(n+1)-types over ``sigma``.

    For sigma = (1, 0, ...): {(1+l, r) : l >= 0, r in {0, 1}} with a <= first_max.
    For sigma = (2, 0, ...): {(2+j, q) : j >= 0, q in {0, 1, 2}} with a <= first_max.
    """
    head = _sigma_head(sigma, n)
    if head == (1,):
        return {
            (1 + ell, r)
            for ell in range(first_max)
            for r in (0, 1)
            if 1 + ell <= first_max
        }
    if head == (2,):
        return {
            (2 + j, q)
            for j in range(first_max - 1)
            for q in (0, 1, 2)
            if 2 + j <= first_max
        }
    raise UnsupportedSigma(f"unsupported sigma head {head}")


def enumerate_bundle_ktypes3(j_max: int) -> list[KType]:
    """K-types over the 3-sphere: the five branches q in {-2,...,2}.

    SO(4) has rank two, so the second weight entry carries a sign and the
    single family splits into mirror pairs.
    """
    return [
        KType(dim_n=3, j=j, q=q)
        for j in range(j_max + 1)
        for q in (-2, -1, 0, 1, 2)
    ]


def _sigma_head(sigma: DominantWeight, n: int) -> tuple[int, ...]:
    """Validate that sigma is an SO(n) weight of shape (s, 0, ...) and return (s,)."""
    if sigma.group_rank != n:
        raise RankMismatch(
            f"sigma must be a weight of SO({n}), got SO({sigma.group_rank})"
        )
    if not is_dominant(sigma):
        raise UnsupportedSigma(f"sigma {sigma.entries} is not dominant")
    if any(e != 0 for e in sigma.entries[1:]):
        raise UnsupportedSigma(
            f"sigma {sigma.entries} has support beyond the first entry"
        )
    return sigma.entries[:1]


def dominant_weights_upto(group_rank: int, bound: int) -> Iterator[DominantWeight]:
    """All dominant weights of SO(group_rank) with every |entry| <= bound."""
    rank = group_rank // 2
    even = group_rank % 2 == 0

    def rec(prefix: list[int]) -> Iterator[tuple[int, ...]]:
        if len(prefix) == rank:
            yield tuple(prefix)
            return
        cap = prefix[-1] if prefix else bound
        is_last = len(prefix) == rank - 1
        lo = -cap if (even and is_last) else 0
        for value in range(lo, cap + 1):
            prefix.append(value)
            yield from rec(prefix)
            prefix.pop()

    for entries in rec([]):
        yield _weight(entries, group_rank)


def bundle_ktypes_bruteforce(
    sigma: DominantWeight, n: int, first_max: int
) -> set[tuple[int, int]]:
    """Leading two entries of every bounded SO(n+1)-weight branching to ``sigma``.

    Exhaustive search over all dominant weights with entries bounded by
    ``first_max``; the result must coincide with :func:`bundle_weights` and
    in particular every branching weight is supported on its first two slots.
    """
    _sigma_head(sigma, n)
    found: set[tuple[int, int]] = set()
    for beta in dominant_weights_upto(n + 1, first_max):
        if branches(beta, sigma):
            tail = beta.entries[2:]
            if any(e != 0 for e in tail):
                raise DomainError(
                    f"branching weight {beta.entries} has unexpected support "
                    "beyond the first two entries"
                )
            first = beta.entries[0]
            second = beta.entries[1] if len(beta.entries) > 1 else 0
            found.add((first, second))
    return found
