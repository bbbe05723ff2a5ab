"""Uniform verification over all primes when both top multiplicities are large.

For deficiencies k1 = p - m1 and k2 = p - m2 (both >= 3 and <= p/3), every
element of a putative zero-sum-free multiset besides the two axis elements
must lie in a fixed p-independent region L of Z^2.  Candidate contents
A' of that region are enumerated as exact integer points; a candidate
rules out a prime p exactly when some subset sum s of A' satisfies

    pi_1(s) mod p in {0} or [k1, p-1]   and   pi_2(s) mod p in {0} or [k2, p-1]

(the missing amount can then be supplied by the axis elements).  Subset
sums are bounded by ell*(k_i - 2) in absolute value, so all primes from
p_max = max(k_i + ell*(k_i-2)) on behave identically and a single sentinel
value p_max -- prime or not -- decides them all.  A pair (k1, k2) is
verified when no (A', p) survives.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from multiprocessing import Pool
from typing import Callable, Iterable, Optional

from .groups import MultiSet


def _primes_in(lo: int, hi: int) -> list[int]:
    """Primes in [lo, hi); trial division (tiny ranges only)."""
    out = []
    for v in range(max(lo, 2), hi):
        d = 2
        while d * d <= v:
            if v % d == 0:
                break
            d += 1
        else:
            out.append(v)
    return out


@dataclass(frozen=True)
class RegionL:
    """The p-independent region of Z^2 holding all non-axis elements."""

    k1: int
    k2: int
    points: frozenset[tuple[int, int]]


def region_l(k1: int, k2: int) -> RegionL:
    """[1,k1-2]x[1,k2-2], plus the two mirrored blocks cut by x+y <= 1."""
    if k1 < 3 or k2 < 3:
        raise ValueError("region is defined for k1, k2 >= 3")
    pts: set[tuple[int, int]] = set()
    for x in range(1, k1 - 1):
        for y in range(1, k2 - 1):
            pts.add((x, y))
    for x in range(-k1 + 2, 0):
        for y in range(1, k2 - 1):
            if x + y <= 1:
                pts.add((x, y))
    for x in range(1, k1 - 1):
        for y in range(-k2 + 2, 0):
            if x + y <= 1:
                pts.add((x, y))
    return RegionL(k1=k1, k2=k2, points=frozenset(pts))


@dataclass(frozen=True)
class PrimeWindow:
    """Candidate group orders whose verdicts decide all primes.

    The sentinel p_max is always the last entry, prime or not: beyond it
    the survival check no longer depends on p.
    """

    candidates: tuple[int, ...]
    p_max: int


def prime_window(k1: int, k2: int) -> PrimeWindow:
    if k1 < 3 or k2 < 3:
        raise ValueError("window is defined for k1, k2 >= 3")
    ell = k1 + k2 - 2
    p_max = max(k1 + ell * (k1 - 2), k2 + ell * (k2 - 2))
    p_min = 3 * max(k1, k2)  # below this the deficiencies exceed p/3
    cands = [p for p in _primes_in(p_min, p_max) if p != p_max]
    cands.append(p_max)
    return PrimeWindow(candidates=tuple(cands), p_max=p_max)


def zero_sum_condition(s: tuple[int, int], k1: int, k2: int, p: int) -> bool:
    """Does the exact integer subset sum s complete to a zero-sum mod p?

    True iff both coordinates, reduced mod p, are 0 or >= k_i: the axis
    elements (multiplicities p-k1, p-k2) then supply the complement.
    """
    r1 = s[0] % p
    r2 = s[1] % p
    return (r1 == 0 or r1 >= k1) and (r2 == 0 or r2 >= k2)


@dataclass
class PairReport:
    k1: int
    k2: int
    window: PrimeWindow
    region_size: int
    subsets_enumerated: int
    nodes: int
    survivors: list[tuple[tuple[tuple[int, int], ...], tuple[int, ...]]]
    wall_time: float

    @property
    def verified(self) -> bool:
        return not self.survivors


@dataclass
class TwoMultResult:
    verdict: str
    pairs: list[PairReport]
    wall_time: float
    max_k: Optional[int]


def _order_region(points: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    """Try far-out points first: they rule out primes fastest."""
    return sorted(points, key=lambda q: (-(abs(q[0]) + abs(q[1])), q))


def verify_pair(
    k1: int,
    k2: int,
    on_node: Optional[Callable[[list[tuple[int, int]], tuple[int, ...]], None]] = None,
    element_order: Optional[list[tuple[int, int]]] = None,
    max_survivors: int = 4,
) -> PairReport:
    """Enumerate every multiset A' over region L of size ell = k1+k2-2.

    A per-branch window of still-possible p shrinks as elements join A';
    empty window = branch dead.  Complete candidates with a non-empty
    window are survivors (there must be none).  `on_node` is a test hook
    called with (partial A', alive primes) at every node.
    """
    started = time.monotonic()
    reg = region_l(k1, k2)
    win = prime_window(k1, k2)
    ell = k1 + k2 - 2
    order = element_order if element_order is not None else _order_region(reg.points)
    survivors: list = []
    stats = {"subsets": 0, "nodes": 0}

    chosen: list[tuple[int, int]] = []

    def walk(start: int, alive: tuple[int, ...], sums: frozenset[tuple[int, int]]) -> None:
        stats["nodes"] += 1
        if on_node is not None:
            on_node(list(chosen), alive)
        if len(chosen) == ell:
            stats["subsets"] += 1
            if alive and len(survivors) < max_survivors:
                survivors.append((tuple(chosen), alive))
            return
        if not alive:
            return
        for j in range(start, len(order)):
            a = order[j]
            new_sums = {(sx + a[0], sy + a[1]) for sx, sy in sums}
            new_sums.add(a)
            new_sums -= sums
            nxt = alive
            for s in new_sums:
                nxt = tuple(p for p in nxt if not zero_sum_condition(s, k1, k2, p))
                if not nxt:
                    break
            chosen.append(a)
            walk(j, nxt, sums | new_sums)
            chosen.pop()

    walk(0, win.candidates, frozenset())
    return PairReport(
        k1=k1,
        k2=k2,
        window=win,
        region_size=len(reg.points),
        subsets_enumerated=stats["subsets"],
        nodes=stats["nodes"],
        survivors=survivors,
        wall_time=time.monotonic() - started,
    )


def _pair_worker(args: tuple[int, int]) -> PairReport:
    return verify_pair(*args)


def verify_two_mult(
    max_k: int = 14,
    pairs: Optional[list[tuple[int, int]]] = None,
    workers: int = 1,
) -> TwoMultResult:
    """Verify every (k1, k2) with k1, k2 >= 3 and k1 + k2 <= max_k."""
    started = time.monotonic()
    if pairs is None:
        if max_k < 6:
            raise ValueError("max_k must be at least 6 (k1, k2 >= 3)")
        pairs = [
            (k1, k2)
            for s in range(6, max_k + 1)
            for k1 in range(3, s - 2)
            for k2 in (s - k1,)
        ]
    if workers > 1 and len(pairs) > 1:
        with Pool(processes=workers) as pool:
            reports = pool.map(_pair_worker, pairs)
    else:
        reports = [verify_pair(k1, k2) for k1, k2 in pairs]
    verdict = "verified" if all(r.verified for r in reports) else "counterexample"
    return TwoMultResult(
        verdict=verdict,
        pairs=reports,
        wall_time=time.monotonic() - started,
        max_k=max_k if pairs is None else None,
    )


def concrete_multiset(k1: int, k2: int, a_prime: Iterable[tuple[int, int]], p: int) -> MultiSet:
    """The actual multiset over Z_p^2 that a candidate A' represents."""
    items: list[tuple[tuple[int, int], int]] = [((1, 0), p - k1), ((0, 1), p - k2)]
    for x, y in a_prime:
        items.append(((x % p, y % p), 1))
    return MultiSet.from_pairs(items)
