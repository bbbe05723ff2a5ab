"""JIT-compiled shard search (numba), mirroring propb._ShardSearch.

Bitmaps live in four 64-bit words (moduli up to 16), the DFS is iterative
with preallocated per-depth state, and traversal order is identical to the
pure-Python reference: multiplicity levels descending, candidates in
lexicographic (x, y) order, the same four cuts at the same points.  Bound
updates go through an undo log instead of per-depth copies.  The test
suite checks bit-for-bit agreement (verdict, witness, node count) against
the reference.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except Exception:  # pragma: no cover - numba is an optional accelerator
    HAVE_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore
        def wrap(fn):
            return fn

        return wrap


W = 4  # 256 bits; enough for n <= 16
MAX_ENGINE_N = 16
_LOGCAP = 1 << 16

_TZTAB = np.zeros(64, dtype=np.int64)
for _i in range(64):
    _TZTAB[(((1 << _i) * 0x022FDD63CC95386D) & ((1 << 64) - 1)) >> 58] = _i


class _Tables:
    """Per-modulus geometry packed into numpy arrays."""

    _cache: dict[int, "_Tables"] = {}

    def __init__(self, n: int, prime: bool) -> None:
        from .propb import _Geometry

        geo = _Geometry.get(n, prime)
        nn = n * n
        self.n = n
        self.prime = prime
        self.lex_rank = np.array(geo.lex_rank, dtype=np.int16)
        self.neg_idx = np.array(geo.neg_idx, dtype=np.int16)
        self.line_of = np.array(geo.line_of, dtype=np.int16)
        self.num_lines = max(geo.num_lines, 1)
        lo_cnt = np.zeros(nn, dtype=np.int16)
        lo = np.zeros((nn, max(n, 2)), dtype=np.int16)
        for idx in range(nn):
            others = geo.line_others[idx]
            lo_cnt[idx] = len(others)
            for j, o in enumerate(others):
                lo[idx, j] = o
        self.line_others = lo
        self.line_others_cnt = lo_cnt
        self.full = _to_words((1 << nn) - 1)
        from .sumsets import _Layout

        lay = _Layout.get(n)
        cols = np.zeros((n + 1, W), dtype=np.uint64)
        for k in range(n + 1):
            cols[k] = _to_words(lay.cols_lt[k])
        self.cols_lt = cols

    @classmethod
    def get(cls, n: int, prime: bool) -> "_Tables":
        t = cls._cache.get(n)
        if t is None:
            t = cls._cache[n] = cls(n, prime)
        return t


def _to_words(v: int) -> np.ndarray:
    out = np.zeros(W, dtype=np.uint64)
    for w in range(W):
        out[w] = (v >> (64 * w)) & ((1 << 64) - 1)
    return out


@njit(cache=True, inline="always")
def _big_shl(src, t, out):
    wsh = t // 64
    bsh = t % 64
    for w in range(W - 1, -1, -1):
        v = np.uint64(0)
        sw = w - wsh
        if sw >= 0:
            v = src[sw] << np.uint64(bsh)
            if bsh > 0 and sw - 1 >= 0:
                v |= src[sw - 1] >> np.uint64(64 - bsh)
        out[w] = v


@njit(cache=True, inline="always")
def _big_shr(src, t, out):
    wsh = t // 64
    bsh = t % 64
    for w in range(W):
        v = np.uint64(0)
        sw = w + wsh
        if sw < W:
            v = src[sw] >> np.uint64(bsh)
            if bsh > 0 and sw + 1 < W:
                v |= src[sw + 1] << np.uint64(64 - bsh)
        out[w] = v


@njit(cache=True, inline="always")
def _shift2d(bits, dx, dy, n, cols_lt, full, t1, t2):
    """bits <- bits cyclically translated by (dx, dy); t1, t2 scratch."""
    if dx > 0:
        _big_shl(bits, dx, t1)
        _big_shr(bits, n - dx, t2)
        low = cols_lt[dx]
        for w in range(W):
            bits[w] = (t1[w] & full[w] & ~low[w]) | (t2[w] & low[w])
    if dy > 0:
        _big_shl(bits, dy * n, t1)
        _big_shr(bits, (n - dy) * n, t2)
        for w in range(W):
            bits[w] = (t1[w] & full[w]) | t2[w]


@njit(cache=True)
def _search(
    n,
    target,
    prime,
    m1,
    a1_idx,
    m2,
    a2_idx,
    m3,
    ub_init,
    rule_neg,
    rule_sub,
    rule_help,
    rule_cap,
    lex_rank,
    neg_idx,
    line_of,
    line_others,
    line_others_cnt,
    num_lines,
    cols_lt,
    full,
    tztab,
    witness_out,
):
    """Run one shard.  Returns (found, witness_len, nodes); found < 0 means
    the undo log overflowed and the caller must fall back."""
    nn = n * n
    maxd = target + 2

    ub = np.zeros(nn, dtype=np.int8)
    log_i = np.zeros(_LOGCAP, dtype=np.int16)
    log_v = np.zeros(_LOGCAP, dtype=np.int8)
    log_top = 0
    line_live = np.zeros(num_lines, dtype=np.int16)
    live = 0
    in_path = np.zeros(nn, dtype=np.uint8)

    sums = np.zeros((maxd, W), dtype=np.uint64)
    non = np.zeros((maxd, W), dtype=np.uint64)
    fsize = np.zeros(maxd, dtype=np.int32)
    fprevk = np.zeros(maxd, dtype=np.int32)
    ffloor = np.zeros(maxd, dtype=np.int32)
    fk = np.zeros(maxd, dtype=np.int32)
    fkmin = np.zeros(maxd, dtype=np.int32)
    fci = np.zeros(maxd, dtype=np.int32)
    fbase = np.zeros(maxd, dtype=np.int32)
    pidx = np.zeros(maxd, dtype=np.int32)
    pk = np.zeros(maxd, dtype=np.int32)

    t1 = np.zeros(W, dtype=np.uint64)
    t2 = np.zeros(W, dtype=np.uint64)
    cur = np.zeros(W, dtype=np.uint64)
    ns = np.zeros(W, dtype=np.uint64)
    nnw = np.zeros(W, dtype=np.uint64)

    nodes = np.int64(0)
    deb = np.uint64(0x022FDD63CC95386D)

    # ---------------- root: insert a1^m1 and a2^m2, apply rules ----------------
    sums[0, 0] = np.uint64(1)
    for i in range(nn):
        ub[i] = ub_init
    ub[0] = 0
    if prime:
        for l in range(num_lines):
            line_live[l] = n - 1
        live = num_lines
    size = 0
    for which in range(2):
        aidx = a1_idx if which == 0 else a2_idx
        amult = m1 if which == 0 else m2
        ax = aidx % n
        ay = aidx // n
        for w in range(W):
            cur[w] = sums[0, w]
        added = 0
        for _s in range(amult if amult < n else n):
            _shift2d(cur, ax, ay, n, cols_lt, full, t1, t2)
            if cur[0] & np.uint64(1):
                break
            for w in range(W):
                non[0, w] |= cur[w]
                sums[0, w] |= cur[w]
            added += 1
        if added < amult:
            return 0, 0, np.int64(0)  # the anchors alone force a zero-sum
        size += amult
        # exclusion rules for the anchor (logged but never reverted)
        if ub[aidx] > 0:
            log_i[log_top] = aidx
            log_v[log_top] = ub[aidx]
            log_top += 1
            ub[aidx] = 0
            if prime:
                lid = line_of[aidx]
                if lid >= 0:
                    line_live[lid] -= 1
                    if line_live[lid] == 0:
                        live -= 1
        if rule_neg:
            for w in range(W):
                v = non[0, w]
                while v:
                    lsb = v & (~v + np.uint64(1))
                    v ^= lsb
                    j = neg_idx[w * 64 + tztab[(lsb * deb) >> np.uint64(58)]]
                    if ub[j] > 0:
                        log_i[log_top] = j
                        log_v[log_top] = ub[j]
                        log_top += 1
                        ub[j] = 0
                        if prime:
                            lid = line_of[j]
                            if lid >= 0:
                                line_live[lid] -= 1
                                if line_live[lid] == 0:
                                    live -= 1
        if rule_sub and prime:
            for t in range(line_others_cnt[aidx]):
                j = line_others[aidx, t]
                if ub[j] > 0:
                    log_i[log_top] = j
                    log_v[log_top] = ub[j]
                    log_top += 1
                    ub[j] = 0
                    lid = line_of[j]
                    if lid >= 0:
                        line_live[lid] -= 1
                        if line_live[lid] == 0:
                            live -= 1
        if rule_help and a1_idx == 1 and 2 * amult + m1 + n - 1 <= target:
            x1 = ax
            base = ay * n
            for d in range(1, n // 2 + 1):
                if d <= m1 + 1 and n - amult * d <= m1 + 1:
                    for sgn in range(2):
                        x2 = (x1 - d) % n if sgn == 0 else (x1 + d) % n
                        j = base + x2
                        if j == aidx or j == a1_idx:
                            continue
                        cap = amult - 1
                        if ub[j] > cap:
                            log_i[log_top] = j
                            log_v[log_top] = ub[j]
                            log_top += 1
                            ub[j] = cap
                            if cap == 0 and prime:
                                lid = line_of[j]
                                if lid >= 0:
                                    line_live[lid] -= 1
                                    if line_live[lid] == 0:
                                        live -= 1
        in_path[aidx] = 1

    if size == target:
        return 1, 0, np.int64(0)

    # static candidate order (lex by (x, y)); dead entries skipped by ub
    order = np.zeros(nn, dtype=np.int16)
    c = 0
    for x in range(n):
        for y in range(n):
            i = y * n + x
            if ub[i] > 0:
                order[c] = i
                c += 1
    order_cnt = c

    fsize[0] = size
    fprevk[0] = m2
    ffloor[0] = -1
    budget = target - size
    if m3 > 0:
        fk[0] = m3
        fkmin[0] = m3
        if m3 > (m2 if m2 < budget else budget):
            return 0, 0, np.int64(1)
    else:
        fk[0] = m2 if m2 < budget else budget
        fkmin[0] = 1
    fci[0] = -1
    fbase[0] = log_top
    nodes += 1

    d = 0
    while d >= 0:
        k = fk[d]
        size = fsize[d]
        if fci[d] < 0:
            okroom = True
            if rule_cap:
                if prime:
                    okroom = size + k * live >= target
                else:
                    room = 0
                    okroom = False
                    for t in range(order_cnt):
                        u = ub[order[t]]
                        room += u if u < k else k
                        if size + room >= target:
                            okroom = True
                            break
            if not okroom:
                # capacity is monotone in k: the whole frame is dead
                while log_top > fbase[d]:
                    log_top -= 1
                    i = log_i[log_top]
                    if ub[i] == 0 and prime:
                        lid = line_of[i]
                        if lid >= 0:
                            if line_live[lid] == 0:
                                live += 1
                            line_live[lid] += 1
                    ub[i] = log_v[log_top]
                if d > 0:
                    in_path[pidx[d]] = 0
                d -= 1
                continue
            fci[d] = 0
        floor = ffloor[d] if k == fprevk[d] else -1
        ci = fci[d]
        moved = False
        while ci < order_cnt:
            i = order[ci]
            ci += 1
            if ub[i] < k or lex_rank[i] <= floor:
                continue
            ix = i % n
            iy = i // n
            for w in range(W):
                cur[w] = sums[d, w]
                ns[w] = sums[d, w]
                nnw[w] = non[d, w]
            added = 0
            for _s in range(k if k < n else n):
                _shift2d(cur, ix, iy, n, cols_lt, full, t1, t2)
                if cur[0] & np.uint64(1):
                    break
                for w in range(W):
                    nnw[w] |= cur[w]
                    ns[w] |= cur[w]
                added += 1
            if added < k:
                # -(added+1) copies of i complete a zero-sum in this subtree
                log_i[log_top] = i
                log_v[log_top] = ub[i]
                log_top += 1
                ub[i] = added
                if added == 0 and prime:
                    lid = line_of[i]
                    if lid >= 0:
                        line_live[lid] -= 1
                        if line_live[lid] == 0:
                            live -= 1
                continue
            if size + k == target:
                wl = 0
                for j in range(1, d + 1):
                    witness_out[2 * wl] = pidx[j]
                    witness_out[2 * wl + 1] = pk[j]
                    wl += 1
                witness_out[2 * wl] = i
                witness_out[2 * wl + 1] = k
                wl += 1
                return 1, wl, nodes
            # ---- push child ----
            if log_top + nn + n + 8 > _LOGCAP:
                return -1, 0, nodes
            e = d + 1
            child_base = log_top
            for w in range(W):
                sums[e, w] = ns[w]
                non[e, w] = nnw[w]
            dead = False
            # the placed element leaves the pool
            log_i[log_top] = i
            log_v[log_top] = ub[i]
            log_top += 1
            ub[i] = 0
            if prime:
                lid = line_of[i]
                if lid >= 0:
                    line_live[lid] -= 1
                    if line_live[lid] == 0:
                        live -= 1
            if rule_neg:
                for w in range(W):
                    v = nnw[w] & ~non[d, w]
                    while v:
                        lsb = v & (~v + np.uint64(1))
                        v ^= lsb
                        j = neg_idx[w * 64 + tztab[(lsb * deb) >> np.uint64(58)]]
                        if ub[j] > 0:
                            log_i[log_top] = j
                            log_v[log_top] = ub[j]
                            log_top += 1
                            ub[j] = 0
                            if prime:
                                lid = line_of[j]
                                if lid >= 0:
                                    line_live[lid] -= 1
                                    if line_live[lid] == 0:
                                        live -= 1
            if rule_sub and prime:
                for t in range(line_others_cnt[i]):
                    j = line_others[i, t]
                    if ub[j] > 0:
                        log_i[log_top] = j
                        log_v[log_top] = ub[j]
                        log_top += 1
                        ub[j] = 0
                        lid = line_of[j]
                        if lid >= 0:
                            line_live[lid] -= 1
                            if line_live[lid] == 0:
                                live -= 1
            if rule_help and a1_idx == 1 and 2 * k + m1 + n - 1 <= target:
                base = iy * n
                for dd in range(1, n // 2 + 1):
                    if dd <= m1 + 1 and n - k * dd <= m1 + 1:
                        for sgn in range(2):
                            x2 = (ix - dd) % n if sgn == 0 else (ix + dd) % n
                            j = base + x2
                            if j == i or j == a1_idx:
                                continue
                            if in_path[j]:
                                dead = True
                                break
                            cap = k - 1
                            if ub[j] > cap:
                                log_i[log_top] = j
                                log_v[log_top] = ub[j]
                                log_top += 1
                                ub[j] = cap
                                if cap == 0 and prime:
                                    lid = line_of[j]
                                    if lid >= 0:
                                        line_live[lid] -= 1
                                        if line_live[lid] == 0:
                                            live -= 1
                        if dead:
                            break
            if dead:
                # revert the child's tentative bound updates
                while log_top > child_base:
                    log_top -= 1
                    j = log_i[log_top]
                    if ub[j] == 0 and prime:
                        lid = line_of[j]
                        if lid >= 0:
                            if line_live[lid] == 0:
                                live += 1
                            line_live[lid] += 1
                    ub[j] = log_v[log_top]
                continue
            fsize[e] = size + k
            fprevk[e] = k
            ffloor[e] = lex_rank[i]
            bud = target - fsize[e]
            fk[e] = k if k < bud else bud
            fkmin[e] = 1
            fci[e] = -1
            fbase[e] = child_base
            pidx[e] = i
            pk[e] = k
            in_path[i] = 1
            nodes += 1
            fci[d] = ci
            d = e
            moved = True
            break
        if moved:
            continue
        # scan at this k exhausted; move to the next level down
        fk[d] -= 1
        fci[d] = -1
        if fk[d] < fkmin[d]:
            while log_top > fbase[d]:
                log_top -= 1
                i = log_i[log_top]
                if ub[i] == 0 and prime:
                    lid = line_of[i]
                    if lid >= 0:
                        if line_live[lid] == 0:
                            live += 1
                        line_live[lid] += 1
                ub[i] = log_v[log_top]
            if d > 0:
                in_path[pidx[d]] = 0
            d -= 1

    return 0, 0, nodes


def run_shard(
    n: int,
    prime: bool,
    target: int,
    max_mult: int,
    rules,
    m1: int,
    a1: tuple[int, int],
    m2: int,
    a2: tuple[int, int],
    m3: int,
) -> tuple[bool, list[tuple[int, int, int]], int] | None:
    """Run one shard on the JIT engine.

    Returns (found, witness [(x, y, mult)], nodes) with the two anchors
    included in the witness, or None if the engine cannot run the shard.
    """
    tab = _Tables.get(n, prime)
    a1_idx = a1[1] * n + a1[0]
    a2_idx = a2[1] * n + a2[0]
    witness_out = np.zeros(2 * target + 2, dtype=np.int32)
    found, wlen, nodes = _search(
        n,
        target,
        prime,
        m1,
        a1_idx,
        m2,
        a2_idx,
        m3,
        min(max_mult, m2),
        rules.negatives,
        rules.subgroup,
        rules.algo_help,
        rules.capacity,
        tab.lex_rank,
        tab.neg_idx,
        tab.line_of,
        tab.line_others,
        tab.line_others_cnt,
        tab.num_lines,
        tab.cols_lt,
        tab.full,
        _TZTAB,
        witness_out,
    )
    if found < 0:  # pragma: no cover - undo log overflow
        return None
    if not found:
        return False, [], int(nodes)
    witness = [(a1[0], a1[1], m1), (a2[0], a2[1], m2)]
    for t in range(wlen):
        i = int(witness_out[2 * t])
        k = int(witness_out[2 * t + 1])
        witness.append((i % n, i // n, k))
    return True, witness, int(nodes)
