"""Exhaustive search for maximal zero-sum-free multisets of Z_n^2.

Decides whether a zero-sum-free multiset of size 2n-2 with maximal
multiplicity at most `max_mult` exists.  The search fixes the two
highest-multiplicity elements (via an automorphism normal form), loops
over their multiplicities (m1, m2), and adds the remaining elements in
order of decreasing multiplicity, lexicographic within a level.

Branches are cut by four devices:
  * no element may be added whose addition creates a zero-sum (tracked
    incrementally on the sumset bitmaps; this is the definition, not a
    heuristic);
  * negatives of existing non-empty subset sums are excluded outright;
  * for prime n, two distinct elements of a maximal zero-sum-free
    multiset are never collinear, so a placed element kills its whole
    line -- and the number ell of lines still open bounds the room left
    by k*ell when the current multiplicity level is k;
  * a placed pair (x1,y)^k, (x2,y)^k close enough together combines with
    (1,0)^m into sums covering a full row, which forces a zero-sum once
    the multiset is completed; this caps the multiplicity of row
    neighbours ahead of time.

Shard unit: one (m1, m2) pair (plus the (a1, a2) normal form when n is
composite).  Shards are independent, checkpointable, and run in worker
processes when requested.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass
from multiprocessing import Pool
from typing import Optional, Sequence

from .groups import (
    GroupElem,
    Modulus,
    MultiSet,
    apply_automorphism,
    canonical_pairs,
    invertible_matrices,
    order_of,
)
from .sumsets import SumsetBitmap, has_zero_sum_oracle, shift_bits


# ---------------------------------------------------------------------------
# static per-modulus geometry


class _Geometry:
    """Index tables shared by every shard of one modulus."""

    _cache: dict[int, "_Geometry"] = {}

    def __init__(self, n: int, prime: bool) -> None:
        self.n = n
        self.prime = prime
        nn = n * n
        # element index = y*n + x; lex rank orders by (x, y)
        self.lex_rank = [0] * nn
        self.neg_idx = [0] * nn
        for idx in range(nn):
            x, y = idx % n, idx // n
            self.lex_rank[idx] = x * n + y
            self.neg_idx[idx] = ((n - y) % n) * n + ((n - x) % n)
        self.line_of = [-1] * nn
        self.line_others: list[tuple[int, ...]] = [()] * nn
        self.num_lines = 0
        if prime:
            lines: list[list[int]] = []
            for t in range(n):  # lines generated by (1, t)
                lines.append([((j * t) % n) * n + (j % n) for j in range(1, n)])
            lines.append([(j % n) * n for j in range(1, n)])  # the (0, 1) line
            self.num_lines = len(lines)
            for lid, members in enumerate(lines):
                for idx in members:
                    self.line_of[idx] = lid
            for lid, members in enumerate(lines):
                for idx in members:
                    self.line_others[idx] = tuple(j for j in members if j != idx)

    @classmethod
    def get(cls, n: int, prime: bool) -> "_Geometry":
        geo = cls._cache.get(n)
        if geo is None:
            geo = cls._cache[n] = cls(n, prime)
        return geo


# ---------------------------------------------------------------------------
# bound table


class BoundTable:
    """Per-element remaining-multiplicity upper bounds along one branch.

    `ub[idx]` bounds how many copies of the element with bitmap index idx
    may still join the multiset; bounds only ever decrease.  For prime n
    the table also counts the lines that still accept a new element
    (`live_subgroups`), which feeds the room estimate.
    """

    __slots__ = ("n", "prime", "ub", "line_live", "live_subgroups")

    def __init__(self, n: int, prime: bool, ub: list[int], line_live: list[int], live: int) -> None:
        self.n = n
        self.prime = prime
        self.ub = ub
        self.line_live = line_live
        self.live_subgroups = live

    @classmethod
    def initial(cls, n: Modulus, max_mult: int) -> "BoundTable":
        geo = _Geometry.get(n.n, n.is_prime)
        ub = [max_mult] * (n.n * n.n)
        ub[0] = 0
        if n.is_prime:
            line_live = [n.n - 1] * geo.num_lines
            live = geo.num_lines
        else:
            line_live = []
            live = 0
        return cls(n.n, n.is_prime, ub, line_live, live)

    def copy(self) -> "BoundTable":
        return BoundTable(self.n, self.prime, self.ub.copy(), self.line_live.copy(), self.live_subgroups)

    def bound(self, e: GroupElem | tuple[int, int]) -> int:
        x, y = e
        return self.ub[(y % self.n) * self.n + (x % self.n)]

    def set_zero(self, idx: int) -> None:
        if self.ub[idx] > 0:
            self.ub[idx] = 0
            if self.prime:
                geo = _Geometry.get(self.n, True)
                lid = geo.line_of[idx]
                if lid >= 0:
                    self.line_live[lid] -= 1
                    if self.line_live[lid] == 0:
                        self.live_subgroups -= 1

    def cap_to(self, idx: int, bound: int) -> None:
        if bound <= 0:
            self.set_zero(idx)
        elif self.ub[idx] > bound:
            self.ub[idx] = bound


# public pruning operations (functional views over the search internals)


def prune_negative_sums(bounds: BoundTable, nonempty_sums: SumsetBitmap) -> BoundTable:
    """Exclude the negative of every existing non-empty subset sum."""
    out = bounds.copy()
    geo = _Geometry.get(bounds.n, bounds.prime)
    for e in nonempty_sums:
        out.set_zero(geo.neg_idx[e.y * bounds.n + e.x])
    return out


def prune_subgroup(bounds: BoundTable, a: GroupElem | tuple[int, int], n: Modulus) -> BoundTable:
    """Exclude the rest of <a>: collinear distinct elements cannot coexist
    in a maximal zero-sum-free multiset when n is prime."""
    if not n.is_prime:
        raise ValueError("the collinearity exclusion is only valid for prime n")
    x, y = a
    if (x % n.n, y % n.n) == (0, 0):
        raise ValueError("a must be non-zero")
    out = bounds.copy()
    geo = _Geometry.get(n.n, True)
    for j in geo.line_others[(y % n.n) * n.n + (x % n.n)]:
        out.set_zero(j)
    return out


def prune_algo_help(
    bounds: BoundTable,
    a: GroupElem | tuple[int, int],
    k: int,
    m: int,
    n: Modulus,
    target: int | None = None,
) -> BoundTable:
    """Row-neighbour caps from the interval-covering zero-sum argument.

    With (1,0) at multiplicity m and (x1,y) at multiplicity k, any (x2,y)
    at multiplicity k with |x1-x2| <= m+1 and n - k*|x1-x2| <= m+1 forces
    a zero-sum in every completion of size >= 2k+m+n-1, so (x2,y) is
    capped at k-1.
    """
    nn = n.n
    tgt = 2 * nn - 2 if target is None else target
    out = bounds.copy()
    if k < 1 or 2 * k + m + nn - 1 > tgt:
        return out
    x1, y = a
    x1 %= nn
    y %= nn
    for d in range(1, nn // 2 + 1):
        if d <= m + 1 and nn - k * d <= m + 1:
            for x2 in ((x1 - d) % nn, (x1 + d) % nn):
                if (x2, y) != (x1, y):
                    out.cap_to(y * nn + x2, k - 1)
    return out


def prune_capacity(current_size: int, k: int, live_subgroups: int, n: Modulus | int) -> bool:
    """Room estimate: with ell open lines and level k, at most k*ell
    elements can still be placed.  Returns False when the branch is dead."""
    return current_size + k * live_subgroups >= 2 * int(n) - 2


# ---------------------------------------------------------------------------
# configuration and results


@dataclass(frozen=True)
class RuleSet:
    negatives: bool = True
    subgroup: bool = True
    algo_help: bool = True
    capacity: bool = True

    @classmethod
    def none(cls) -> "RuleSet":
        return cls(False, False, False, False)


@dataclass(frozen=True)
class TripleConstraint:
    """Restrict the search to profiles with three large multiplicities."""

    min_top3_sum: int
    m1_cap: int


@dataclass(frozen=True)
class SearchConfig:
    n: Modulus
    max_mult: Optional[int] = None  # default n - 3
    triple: Optional[TripleConstraint] = None
    workers: int = 1
    checkpoint_path: Optional[str] = None
    resume: bool = False
    rules: RuleSet = RuleSet()
    engine: str = "auto"  # "auto" | "fast" | "python"

    def effective_max_mult(self) -> int:
        return self.n.n - 3 if self.max_mult is None else self.max_mult

    def target_size(self) -> int:
        return 2 * self.n.n - 2

    def use_fast_engine(self) -> bool:
        if self.engine == "python":
            return False
        from . import _engine

        ok = _engine.HAVE_NUMBA and self.n.n <= _engine.MAX_ENGINE_N
        if self.engine == "fast" and not ok:
            raise ValueError("fast engine unavailable for this configuration")
        return ok


@dataclass(frozen=True)
class Counterexample:
    """A zero-sum-free multiset of size 2n-2 within the multiplicity cap."""

    multiset: MultiSet
    profile: tuple[int, ...]
    n: int

    @classmethod
    def build(cls, multiset: MultiSet, n: Modulus, max_mult: int) -> "Counterexample":
        if multiset.size != 2 * n.n - 2:
            raise RuntimeError(f"counterexample has size {multiset.size}, want {2 * n.n - 2}")
        if has_zero_sum_oracle(multiset, n):
            raise RuntimeError("counterexample fails the subset-enumeration oracle")
        profile = tuple(multiset.multiplicities())
        if profile[0] > max_mult:
            raise RuntimeError("counterexample exceeds the multiplicity cap")
        return cls(multiset=multiset, profile=profile, n=n.n)


@dataclass(frozen=True)
class Shard:
    index: int
    m1: int
    m2: int
    a1: GroupElem
    a2: GroupElem
    m3: Optional[int] = None  # triple mode only

    def key(self) -> tuple:
        return (self.m1, self.m2, self.a1, self.a2, self.m3)


@dataclass
class ShardResult:
    shard: Shard
    verdict: str  # "verified" | "counterexample"
    nodes: int
    witness: Optional[list[tuple[int, int, int]]] = None  # [(x, y, mult)]


@dataclass
class SearchResult:
    verdict: str  # "verified" | "counterexample"
    counterexample: Optional[Counterexample]
    shards_total: int
    shards_done: int
    nodes: int
    wall_time: float
    mode: str
    n: int
    max_mult: int


# ---------------------------------------------------------------------------
# the per-shard search


class _ShardSearch:
    def __init__(self, cfg: SearchConfig) -> None:
        n = cfg.n
        self.n = n.n
        self.prime = n.is_prime
        self.modulus = n
        self.target = cfg.target_size()
        self.rules = cfg.rules
        self.geo = _Geometry.get(n.n, n.is_prime)
        self.max_mult = cfg.effective_max_mult()
        self.nodes = 0
        self.path: list[tuple[int, int]] = []
        self.in_path: set[int] = set()
        self.found: Optional[list[tuple[int, int]]] = None
        self.m1 = 0
        self.a1_idx = -1

    # -- sumset chain ------------------------------------------------------

    def _place(self, sums: int, non: int, idx: int, k: int) -> tuple[int, int, int]:
        """Add up to k copies of the element at idx; stop before a zero-sum.

        Returns (sums', nonempty', added)."""
        n = self.n
        x, y = idx % n, idx // n
        cur = sums
        acc = sums
        nn_ = non
        added = 0
        for _ in range(k if k < n else n):
            cur = shift_bits(cur, x, y, n)
            if cur & 1:
                return acc, nn_, added
            nn_ |= cur
            acc |= cur
            added += 1
        return acc, nn_, k

    # -- rule application ---------------------------------------------------

    def _apply_rules(self, b: BoundTable, idx: int, k: int, new_non: int) -> bool:
        """Update bounds after placing k copies of idx.  False => branch dead."""
        b.set_zero(idx)
        geo = self.geo
        if self.rules.negatives:
            neg = geo.neg_idx
            v = new_non
            while v:
                low = v & -v
                v ^= low
                b.set_zero(neg[low.bit_length() - 1])
        if self.rules.subgroup and self.prime:
            for j in geo.line_others[idx]:
                b.set_zero(j)
        if self.rules.algo_help and self.a1_idx == 1:  # a1 == (1, 0)
            n = self.n
            m = self.m1
            if 2 * k + m + n - 1 <= self.target:
                x1, y = idx % n, idx // n
                base = y * n
                for d in range(1, n // 2 + 1):
                    if d <= m + 1 and n - k * d <= m + 1:
                        for x2 in ((x1 - d) % n, (x1 + d) % n):
                            j = base + x2
                            if j == idx or j == self.a1_idx:
                                continue
                            if j in self.in_path:
                                return False  # pair complete: zero-sum forced
                            b.cap_to(j, k - 1)
        return True

    # -- recursion -----------------------------------------------------------

    def _extend(
        self,
        sums: int,
        non: int,
        bounds: BoundTable,
        cands: list[int],
        size: int,
        prev_k: int,
        floor_rank: int,
        exact_k: Optional[int] = None,
    ) -> bool:
        self.nodes += 1
        target = self.target
        budget = target - size
        max_k = prev_k if prev_k < budget else budget
        ks: Sequence[int] = (exact_k,) if exact_k is not None else range(max_k, 0, -1)
        rank = self.geo.lex_rank
        for k in ks:
            if exact_k is not None and (k > max_k or k < 1):
                return False
            if self.rules.capacity:
                if self.prime:
                    if size + k * bounds.live_subgroups < target:
                        break
                else:
                    ub = bounds.ub
                    room = 0
                    for i in cands:
                        u = ub[i]
                        room += u if u < k else k
                        if room + size >= target:
                            break
                    if size + room < target:
                        break
            floor = floor_rank if k == prev_k else -1
            ub = bounds.ub
            for i in cands:
                if ub[i] < k or rank[i] <= floor:
                    continue
                s2, n2, added = self._place(sums, non, i, k)
                if added < k:
                    bounds.cap_to(i, added)
                    continue
                if size + k == target:
                    self.found = self.path + [(i, k)]
                    return True
                b2 = bounds.copy()
                if not self._apply_rules(b2, i, k, n2 & ~non):
                    continue
                ub2 = b2.ub
                cands2 = [j for j in cands if ub2[j] > 0]
                self.path.append((i, k))
                self.in_path.add(i)
                ok = self._extend(s2, n2, b2, cands2, size + k, k, rank[i])
                self.path.pop()
                self.in_path.discard(i)
                if ok:
                    return True
        return False

    # -- shard entry ----------------------------------------------------------

    def run(self, shard: Shard) -> ShardResult:
        n = self.n
        self.nodes = 0
        self.path = []
        self.in_path = set()
        self.found = None
        self.m1 = shard.m1
        a1_idx = shard.a1.y * n + shard.a1.x
        a2_idx = shard.a2.y * n + shard.a2.x
        self.a1_idx = a1_idx

        sums, non = 1, 0
        bounds = BoundTable.initial(self.modulus, min(self.max_mult, shard.m2))

        for idx, mult in ((a1_idx, shard.m1), (a2_idx, shard.m2)):
            s2, n2, added = self._place(sums, non, idx, mult)
            if added < mult:
                return ShardResult(shard, "verified", self.nodes)
            if not self._apply_rules(bounds, idx, mult, n2 & ~non):
                return ShardResult(shard, "verified", self.nodes)
            sums, non = s2, n2
            self.path.append((idx, mult))
            self.in_path.add(idx)

        size = shard.m1 + shard.m2
        if size == self.target:
            self.found = list(self.path)
        else:
            ub = bounds.ub
            cands = sorted((i for i in range(n * n) if ub[i] > 0), key=self.geo.lex_rank.__getitem__)
            self._extend(sums, non, bounds, cands, size, shard.m2, -1, exact_k=shard.m3)

        if self.found is None:
            return ShardResult(shard, "verified", self.nodes)
        witness = [(i % n, i // n, k) for i, k in self.found]
        return ShardResult(shard, "counterexample", self.nodes, witness)


# ---------------------------------------------------------------------------
# shard enumeration, checkpointing, and the drivers


_PAIR_CACHE: dict[tuple, list] = {}


def _search_pairs(n: Modulus, a1_full_order: bool, a2_off_axis: bool, symmetric: bool) -> list:
    """Normal-form pairs, filtered, thinned to one per automorphism orbit.

    `a1_full_order` keeps only pairs whose first element has order n; it is
    sound only when every element of the multiset ties for the top
    multiplicity (m1 = m2 = 1) and the subgroup capacities rule out a
    multiset avoiding full-order elements entirely (the caller checks).
    `a2_off_axis` drops a2 on the x-axis; sound when m2 = 1, because the
    axis row holds at most n-1 of the 2n-2 elements, so some multiplicity-1
    anchor off the row always exists.  `symmetric` additionally merges a
    pair with its role-swapped image (sound when m1 = m2).  Both filters
    respect orbits: the order of a1 and collinearity of a2 with a1 are
    automorphism invariants.
    """
    key = (n.n, a1_full_order, a2_off_axis, symmetric)
    if key in _PAIR_CACHE:
        return _PAIR_CACHE[key]
    pairs = canonical_pairs(n)
    m = n.n
    if a1_full_order:
        pairs = [(a1, a2) for a1, a2 in pairs if order_of(a1, m) == m]
    if a2_off_axis:
        pairs = [(a1, a2) for a1, a2 in pairs if a2.y != 0]
    if n.is_prime:
        _PAIR_CACHE[key] = pairs
        return pairs
    mats = list(invertible_matrices(m))
    index = {p: i for i, p in enumerate(pairs)}
    parent = list(range(len(pairs)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    for i, (a1, a2) in enumerate(pairs):
        for M in mats:
            b1 = apply_automorphism(M, a1, m)
            b2 = apply_automorphism(M, a2, m)
            j = index.get((b1, b2))
            if j is not None:
                union(i, j)
            if symmetric:
                j = index.get((b2, b1))
                if j is not None:
                    union(i, j)
    out = [p for i, p in enumerate(pairs) if find(i) == i]
    _PAIR_CACHE[key] = out
    return out


def _anchor_counting_ok(n: int) -> bool:
    """May multisets of size 2n-2 with all multiplicities 1 be anchored at
    a full-order element?  Yes when the proper characteristic subgroups
    are too small to hold the multiset: a zero-sum-free intersection with
    the index-q^2 subgroup (a rank-2 group of order (n/q)^2) has at most
    2(n/q) - 2 elements."""
    room = 0
    m = n
    q = 2
    while q * q <= m:
        if m % q == 0:
            room += 2 * (n // q) - 2
            while m % q == 0:
                m //= q
        q += 1
    if m > 1 and m < n:
        room += 2 * (n // m) - 2
    if m == n:  # n prime
        return False
    return room < 2 * n - 2


def _pairs_for(n: Modulus, m1: int, m2: int) -> list:
    reduce_a1 = m1 == 1 and m2 == 1 and _anchor_counting_ok(n.n)
    reduce_a2 = m2 == 1
    return _search_pairs(n, reduce_a1, reduce_a2, symmetric=m1 == m2)


def iter_shards(cfg: SearchConfig) -> list[Shard]:
    n = cfg.n
    max_mult = cfg.effective_max_mult()
    target = cfg.target_size()
    shards: list[Shard] = []
    idx = 0
    if cfg.triple is None:
        for m1 in range(max_mult, 0, -1):
            for m2 in range(min(m1, target - m1), 0, -1):
                for a1, a2 in _pairs_for(n, m1, m2):
                    shards.append(Shard(idx, m1, m2, a1, a2))
                    idx += 1
    else:
        cap = min(max_mult, cfg.triple.m1_cap)
        lo = cfg.triple.min_top3_sum
        pairs = _search_pairs(n, False, False, symmetric=False)
        for m1 in range(cap, 0, -1):
            for m2 in range(min(m1, target - m1), 0, -1):
                for m3 in range(min(m2, target - m1 - m2), 0, -1):
                    if m1 + m2 + m3 < lo or target - m1 - m2 - m3 > 3:
                        continue
                    for a1, a2 in pairs:
                        shards.append(Shard(idx, m1, m2, a1, a2, m3=m3))
                        idx += 1
    return shards


class CheckpointError(ValueError):
    pass


def _checkpoint_header(cfg: SearchConfig) -> str:
    return f"# zerosum2-propb n={cfg.n.n} max_mult={cfg.effective_max_mult()}"


def load_checkpoint(path: str, cfg: SearchConfig) -> dict[tuple, str]:
    """Parse a shard log; refuse anything malformed or from another run."""
    done: dict[tuple, str] = {}
    header = _checkpoint_header(cfg)
    with open(path, "r", encoding="ascii") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if line != header:
                    raise CheckpointError(f"checkpoint header mismatch: {line!r} vs {header!r}")
                continue
            parts = line.split()
            if len(parts) != 8:
                raise CheckpointError(f"line {line_no}: expected 8 fields, got {len(parts)}")
            try:
                vals = [int(p) for p in parts[:7]]
            except ValueError as exc:
                raise CheckpointError(f"line {line_no}: {exc}") from exc
            verdict = parts[7]
            if verdict not in ("verified", "counterexample"):
                raise CheckpointError(f"line {line_no}: bad verdict {verdict!r}")
            if vals[0] != cfg.n.n:
                raise CheckpointError(f"line {line_no}: modulus {vals[0]} does not match n={cfg.n.n}")
            key = (vals[1], vals[2], GroupElem(vals[3], vals[4]), GroupElem(vals[5], vals[6]), None)
            done[key] = verdict
    return done


def _append_record(path: str, cfg: SearchConfig, res: ShardResult, new_file: bool) -> None:
    sh = res.shard
    with open(path, "a", encoding="ascii") as fh:
        if new_file:
            fh.write(_checkpoint_header(cfg) + "\n")
        fh.write(
            f"{cfg.n.n} {sh.m1} {sh.m2} {sh.a1.x} {sh.a1.y} {sh.a2.x} {sh.a2.y} {res.verdict}\n"
        )


def _run_one(cfg: SearchConfig, shard: Shard, search: Optional[_ShardSearch] = None) -> ShardResult:
    if cfg.use_fast_engine():
        from . import _engine

        out = _engine.run_shard(
            cfg.n.n,
            cfg.n.is_prime,
            cfg.target_size(),
            cfg.effective_max_mult(),
            cfg.rules,
            shard.m1,
            (shard.a1.x, shard.a1.y),
            shard.m2,
            (shard.a2.x, shard.a2.y),
            shard.m3 or 0,
        )
        if out is not None:
            found, witness, nodes = out
            if found:
                return ShardResult(shard, "counterexample", nodes, witness)
            return ShardResult(shard, "verified", nodes)
    return (search or _ShardSearch(cfg)).run(shard)


_WORKER_CFG: Optional[SearchConfig] = None


def _worker_init(cfg: SearchConfig) -> None:
    global _WORKER_CFG
    _WORKER_CFG = cfg


def _worker_run(shard: Shard) -> ShardResult:
    assert _WORKER_CFG is not None
    return _run_one(_WORKER_CFG, shard)


def _result_from(cfg: SearchConfig, mode: str, done: int, total: int, nodes: int,
                 witness_result: Optional[ShardResult], started: float) -> SearchResult:
    counterexample = None
    verdict = "verified"
    if witness_result is not None:
        verdict = "counterexample"
        pairs = [((x, y), k) for x, y, k in witness_result.witness or []]
        counterexample = Counterexample.build(
            MultiSet.from_pairs(pairs), cfg.n, cfg.effective_max_mult()
        )
    return SearchResult(
        verdict=verdict,
        counterexample=counterexample,
        shards_total=total,
        shards_done=done,
        nodes=nodes,
        wall_time=time.monotonic() - started,
        mode=mode,
        n=cfg.n.n,
        max_mult=cfg.effective_max_mult(),
    )


def run_search(cfg: SearchConfig) -> SearchResult:
    """Run all shards of the configured search and aggregate the verdict.

    Results are consumed in shard order, so the reported counterexample is
    deterministic for any worker count.
    """
    started = time.monotonic()
    mode = "triple" if cfg.triple is not None else "propb"
    shards = iter_shards(cfg)
    total = len(shards)

    done_map: dict[tuple, str] = {}
    ckpt = cfg.checkpoint_path if cfg.triple is None else None
    new_file = True
    if ckpt and cfg.resume and os.path.exists(ckpt):
        done_map = load_checkpoint(ckpt, cfg)
        new_file = False
    elif ckpt and os.path.exists(ckpt) and not cfg.resume:
        raise CheckpointError(f"checkpoint {ckpt} exists; pass resume to continue it")

    pending: list[Shard] = []
    prior_counterexample: Optional[Shard] = None
    for sh in shards:
        verdict = done_map.get(sh.key())
        if verdict is None:
            pending.append(sh)
        elif verdict == "counterexample" and prior_counterexample is None:
            prior_counterexample = sh
    if prior_counterexample is not None:
        # Re-run just that shard to regenerate the witness deterministically.
        pending = [prior_counterexample]

    nodes = 0
    done = total - len(pending)
    witness: Optional[ShardResult] = None

    if cfg.workers <= 1 or len(pending) <= 1:
        search = _ShardSearch(cfg)
        for sh in pending:
            res = _run_one(cfg, sh, search)
            nodes += res.nodes
            done += 1
            if ckpt and prior_counterexample is None:
                _append_record(ckpt, cfg, res, new_file)
                new_file = False
            if res.verdict == "counterexample":
                witness = res
                break
    else:
        with Pool(processes=cfg.workers, initializer=_worker_init, initargs=(cfg,)) as pool:
            for res in pool.imap(_worker_run, pending, chunksize=1):
                nodes += res.nodes
                done += 1
                if ckpt and prior_counterexample is None:
                    _append_record(ckpt, cfg, res, new_file)
                    new_file = False
                if res.verdict == "counterexample":
                    witness = res
                    pool.terminate()
                    break

    return _result_from(cfg, mode, done, total, nodes, witness, started)


def verify_property_b(cfg: SearchConfig) -> SearchResult:
    """Does every zero-sum-free multiset of size 2n-2 have an element of
    multiplicity > max_mult?  "verified" means yes (none found below cap)."""
    if cfg.triple is not None:
        raise ValueError("use verify_triple_mode for the triple constraint")
    return run_search(cfg)


def verify_triple_mode(
    p: Modulus,
    m1_cap: Optional[int] = None,
    min_top3_sum: Optional[int] = None,
    workers: int = 1,
) -> SearchResult:
    """Search restricted to profiles with m1+m2+m3 >= 2p-5 (three large
    multiplicities); m1 is capped at p-4 by default, the p-3 case being
    handled by the plain verifier."""
    if not p.is_prime:
        raise ValueError("triple mode requires a prime modulus")
    cap = p.n - 4 if m1_cap is None else m1_cap
    lo = 2 * p.n - 5 if min_top3_sum is None else min_top3_sum
    cfg = SearchConfig(n=p, max_mult=cap, triple=TripleConstraint(min_top3_sum=lo, m1_cap=cap), workers=workers)
    return run_search(cfg)
