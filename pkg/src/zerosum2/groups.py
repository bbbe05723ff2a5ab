"""Arithmetic in Z_n and Z_n^2: residue normal forms, multisets, automorphisms.

Everything here is a plain immutable value; the search engines convert to
packed integer indices internally but always speak these types at their
boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Iterator, Mapping, NamedTuple


class GroupElem(NamedTuple):
    """A point of Z_n^2 with both coordinates reduced into [0, n)."""

    x: int
    y: int


def _trial_division_is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Modulus:
    """Group order n together with its (precomputed) primality."""

    n: int
    is_prime: bool

    @classmethod
    def of(cls, n: int) -> "Modulus":
        if n < 2:
            raise ValueError(f"modulus must be >= 2, got {n}")
        return cls(n=n, is_prime=_trial_division_is_prime(n))

    def __int__(self) -> int:
        return self.n


def iota(a: int, n: Modulus | int) -> int:
    """Least positive remainder of a modulo n."""
    return a % int(n)


def abs_val(a: int, n: Modulus | int) -> int:
    """Modulus of the least absolute remainder: min(iota(a), n - iota(a))."""
    m = int(n)
    r = a % m
    return min(r, m - r)


def neg(a: GroupElem, n: Modulus | int) -> GroupElem:
    m = int(n)
    return GroupElem((-a.x) % m, (-a.y) % m)


def add(a: GroupElem, b: GroupElem, n: Modulus | int) -> GroupElem:
    m = int(n)
    return GroupElem((a.x + b.x) % m, (a.y + b.y) % m)


def order_of(a: GroupElem, n: Modulus | int) -> int:
    """Order of a in Z_n^2: n / gcd(x, y, n)."""
    m = int(n)
    return m // gcd(gcd(a.x, a.y), m)


def cyclic_subgroup(a: GroupElem, n: Modulus | int) -> list[GroupElem]:
    """All elements of <a>, starting with the identity."""
    m = int(n)
    out = [GroupElem(0, 0)]
    cur = GroupElem(a.x % m, a.y % m)
    while cur != (0, 0):
        out.append(cur)
        cur = add(cur, a, m)
    return out


Matrix = tuple[tuple[int, int], tuple[int, int]]


def apply_automorphism(M: Matrix, a: GroupElem, n: Modulus | int) -> GroupElem:
    """Apply an invertible 2x2 matrix mod n to a point."""
    m = int(n)
    (m00, m01), (m10, m11) = M
    det = (m00 * m11 - m01 * m10) % m
    if gcd(det, m) != 1:
        raise ValueError(f"matrix {M} is not invertible mod {m}")
    return GroupElem((m00 * a.x + m01 * a.y) % m, (m10 * a.x + m11 * a.y) % m)


def invertible_matrices(n: Modulus | int) -> Iterator[Matrix]:
    """All of GL_2(Z_n).  Exhaustive; intended for small n only."""
    m = int(n)
    for m00 in range(m):
        for m01 in range(m):
            for m10 in range(m):
                for m11 in range(m):
                    det = (m00 * m11 - m01 * m10) % m
                    if gcd(det, m) == 1:
                        yield ((m00, m01), (m10, m11))


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n) if n % d == 0]


def canonical_pairs(n: Modulus) -> list[tuple[GroupElem, GroupElem]]:
    """Normal forms for the ordered pair of highest-multiplicity elements.

    In the prime case any two distinct elements of a maximal zero-sum-free
    multiset form a basis, so the pair can always be moved to
    ((1,0), (0,1)).  For composite n the best we can do with automorphisms
    is a1 = (d, 0) with d | n, and a2 either on the x-axis or of the form
    (x, e) with e | n and 0 <= x < e.  The list may contain several
    representatives of one orbit; it never misses an orbit.
    """
    if n.is_prime:
        return [(GroupElem(1, 0), GroupElem(0, 1))]
    m = n.n
    a2_forms: list[GroupElem] = [GroupElem(x, 0) for x in range(1, m)]
    for e in _divisors(m):
        a2_forms.extend(GroupElem(x, e) for x in range(e))
    pairs = []
    for d in _divisors(m):
        a1 = GroupElem(d, 0)
        pairs.extend((a1, a2) for a2 in a2_forms if a2 != a1)
    return pairs


@dataclass(frozen=True)
class MultiSet:
    """A multiset over Z_n^2: the sequence under construction or inspection.

    Stored as a sorted tuple of (element, multiplicity >= 1) pairs so that
    instances hash, compare and print deterministically.
    """

    items: tuple[tuple[GroupElem, int], ...]
    size: int = field(compare=False)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[GroupElem | tuple[int, int], int]]) -> "MultiSet":
        acc: dict[GroupElem, int] = {}
        for e, k in pairs:
            if k < 0:
                raise ValueError("multiplicity must be >= 0")
            if k == 0:
                continue
            ge = GroupElem(*e)
            acc[ge] = acc.get(ge, 0) + k
        items = tuple(sorted(acc.items()))
        return cls(items=items, size=sum(k for _, k in items))

    @classmethod
    def from_elements(cls, elems: Iterable[GroupElem | tuple[int, int]]) -> "MultiSet":
        return cls.from_pairs((e, 1) for e in elems)

    def multiplicity(self, e: GroupElem | tuple[int, int]) -> int:
        ge = GroupElem(*e)
        for a, k in self.items:
            if a == ge:
                return k
        return 0

    def multiplicities(self) -> list[int]:
        """All multiplicities, largest first."""
        return sorted((k for _, k in self.items), reverse=True)

    def top_multiplicities(self, count: int = 3) -> tuple[int, ...]:
        ms = self.multiplicities() + [0] * count
        return tuple(ms[:count])

    def adding(self, e: GroupElem | tuple[int, int], k: int = 1) -> "MultiSet":
        return MultiSet.from_pairs(list(self.items) + [(GroupElem(*e), k)])

    def support(self) -> list[GroupElem]:
        return [a for a, _ in self.items]

    def as_mapping(self) -> Mapping[GroupElem, int]:
        return dict(self.items)

    def __iter__(self) -> Iterator[GroupElem]:
        """Iterate elements with multiplicity."""
        for a, k in self.items:
            for _ in range(k):
                yield a
