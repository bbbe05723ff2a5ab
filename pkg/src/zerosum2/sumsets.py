"""Subset-sum machinery over Z_n^2 and Z_n.

The workhorse is an n^2-bit membership table for the set of subset sums,
kept as a single Python integer.  Bit layout is row-major y-then-x
(index = y*n + x), so adding (1, 0) to every member is a rotation inside
each row and adding (0, 1) is a rotation of whole rows -- the two shifts
the searches perform most.

`enumerate_subset_sums` is the deliberately naive oracle used to
cross-check the bitmap path; it never touches the bit representation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .groups import GroupElem, Modulus, MultiSet


class _Layout:
    """Precomputed masks for one modulus; cached per n."""

    _cache: dict[int, "_Layout"] = {}

    def __init__(self, n: int) -> None:
        self.n = n
        self.full = (1 << (n * n)) - 1
        row = (1 << n) - 1
        # cols_lt[k]: in every row, the columns x < k.
        self.cols_lt = [0] * (n + 1)
        for k in range(1, n + 1):
            col = row >> (n - k)
            mask = 0
            for y in range(n):
                mask |= col << (y * n)
            self.cols_lt[k] = mask

    @classmethod
    def get(cls, n: int) -> "_Layout":
        lay = cls._cache.get(n)
        if lay is None:
            lay = cls._cache[n] = cls(n)
        return lay


def shift_bits(bits: int, dx: int, dy: int, n: int) -> int:
    """Cyclically translate every member of the bit table by (dx, dy)."""
    lay = _Layout.get(n)
    dx %= n
    dy %= n
    if dx:
        low = lay.cols_lt[dx]
        bits = ((bits << dx) & lay.full & ~low) | ((bits >> (n - dx)) & low)
    if dy:
        w = dy * n
        bits = ((bits << w) & lay.full) | (bits >> (n * n - w))
    return bits


@dataclass(frozen=True)
class SumsetBitmap:
    """Set of subset sums of some multiset, as an n^2-bit table.

    The empty sum is part of the set, so bit (0, 0) is always set for the
    bitmap of a genuine multiset.
    """

    n: int
    bits: int

    @classmethod
    def empty_sum(cls, n: Modulus | int) -> "SumsetBitmap":
        return cls(n=int(n), bits=1)

    @classmethod
    def of(cls, a: MultiSet, n: Modulus | int) -> "SumsetBitmap":
        s = cls.empty_sum(n)
        for e, k in a.items:
            s = insert(s, e, k)
        return s

    def __contains__(self, e: GroupElem | tuple[int, int]) -> bool:
        x, y = e
        return (self.bits >> ((y % self.n) * self.n + (x % self.n))) & 1 == 1

    def __iter__(self) -> Iterator[GroupElem]:
        n, v = self.n, self.bits
        while v:
            low = v & -v
            idx = low.bit_length() - 1
            yield GroupElem(idx % n, idx // n)
            v ^= low

    def __len__(self) -> int:
        return bin(self.bits).count("1")


def insert(s: SumsetBitmap, a: GroupElem | tuple[int, int], count: int = 1) -> SumsetBitmap:
    """Bitmap of the sums after the element a is added `count` more times.

    The chain of multiples of a closes after its order (at most n), so at
    most n shifts are ever performed regardless of count.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    n = s.n
    x, y = a
    acc = cur = s.bits
    for _ in range(min(count, n)):
        cur = shift_bits(cur, x, y, n)
        if cur == s.bits:
            break  # multiples of a have cycled; nothing new can appear
        acc |= cur
    return SumsetBitmap(n=n, bits=acc)


def sigma_plus(a: MultiSet, n: Modulus | int) -> SumsetBitmap:
    """Set of non-empty subset sums of a."""
    m = int(n)
    bits = 1
    non = 0
    for e, k in a.items:
        cur = bits
        for _ in range(min(k, m)):
            cur = shift_bits(cur, e.x, e.y, m)
            non |= cur
            if cur == bits:
                break  # chain of multiples closed
        bits |= non
    return SumsetBitmap(n=m, bits=non)


def has_zero_sum(a: MultiSet, n: Modulus | int) -> bool:
    """True iff some non-empty sub-multiset of a sums to (0, 0)."""
    return (0, 0) in sigma_plus(a, n)


def enumerate_subset_sums(a: MultiSet, n: Modulus | int, nonempty: bool = False) -> set[GroupElem]:
    """Oracle: subset sums by direct multiplicity-aware enumeration.

    Walks every distinct element choosing 0..multiplicity copies; kept free
    of any bitmap machinery on purpose.
    """
    m = int(n)
    # Each partial sum is tagged with whether it uses at least one element.
    tagged: set[tuple[int, int, bool]] = {(0, 0, False)}
    for e, k in a.items:
        new_t = set(tagged)
        for sx, sy, used in tagged:
            cx, cy = sx, sy
            for _ in range(k):
                cx = (cx + e.x) % m
                cy = (cy + e.y) % m
                new_t.add((cx, cy, True))
        tagged = new_t
    if nonempty:
        return {GroupElem(x, y) for x, y, used in tagged if used}
    return {GroupElem(x, y) for x, y, _ in tagged}


def has_zero_sum_oracle(a: MultiSet, n: Modulus | int) -> bool:
    """Oracle variant of `has_zero_sum` via plain enumeration."""
    return GroupElem(0, 0) in enumerate_subset_sums(a, n, nonempty=True)


@dataclass(frozen=True)
class LayeredSumset:
    """Length-layered subset sums of a one-coordinate multiset over Z_n.

    layers[k] is an n-bit table of the sums of exactly k elements.
    """

    n: int
    layers: tuple[int, ...]

    @classmethod
    def build(cls, values: Iterable[int], n: Modulus | int) -> "LayeredSumset":
        m = int(n)
        vals = [v % m for v in values]
        mask = (1 << m) - 1
        layers = [1] + [0] * len(vals)
        for v in vals:
            for k in range(len(layers) - 1, 0, -1):
                prev = layers[k - 1]
                if not prev:
                    continue
                rot = ((prev << v) & mask) | (prev >> (m - v)) if v else prev
                layers[k] |= rot
        return cls(n=m, layers=tuple(layers))

    def layer(self, k: int) -> set[int]:
        if not 0 <= k < len(self.layers):
            raise ValueError(f"length {k} out of range 0..{len(self.layers) - 1}")
        bits = self.layers[k]
        return {i for i in range(self.n) if (bits >> i) & 1}


def sigma_k(values: Iterable[int], k: int, n: Modulus | int) -> set[int]:
    """Sums of exactly k elements of a one-coordinate multiset."""
    return LayeredSumset.build(values, n).layer(k)
