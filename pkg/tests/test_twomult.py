"""Region, prime window, and the uniform two-multiplicity verification."""

import random

import pytest

from zerosum2.lemmas import _is_prime
from zerosum2.sumsets import has_zero_sum
from zerosum2.twomult import (
    concrete_multiset,
    prime_window,
    region_l,
    verify_pair,
    verify_two_mult,
    zero_sum_condition,
)


def test_region_smallest():
    assert set(region_l(3, 3).points) == {(1, 1), (-1, 1), (1, -1)}


def test_region_4_3():
    assert set(region_l(4, 3).points) == {
        (1, 1),
        (2, 1),
        (-1, 1),
        (-2, 1),
        (1, -1),
        (2, -1),
    }


def test_region_matches_direct_evaluation():
    # independent double-loop evaluation of the three clauses
    for k1 in range(3, 13):
        for k2 in range(3, 13):
            direct = set()
            for x in range(-k1 + 2, k1 - 1):
                for y in range(-k2 + 2, k2 - 1):
                    in_b = 1 <= x <= k1 - 2 and 1 <= y <= k2 - 2
                    in_c = -k1 + 2 <= x <= -1 and 1 <= y <= k2 - 2 and x + y <= 1
                    in_d = 1 <= x <= k1 - 2 and -k2 + 2 <= y <= -1 and x + y <= 1
                    if in_b or in_c or in_d:
                        direct.add((x, y))
            assert set(region_l(k1, k2).points) == direct, (k1, k2)


def test_region_rejects_small_k():
    with pytest.raises(ValueError):
        region_l(2, 5)


def test_prime_window_smallest():
    w = prime_window(3, 3)
    assert w.candidates == (7,)
    assert w.p_max == 7


def test_prime_window_7_7():
    w = prime_window(7, 7)
    assert w.p_max == 7 + 12 * 5
    assert w.candidates[0] == 23  # primes from 3*max(k1,k2) = 21 upward
    assert w.candidates[-1] == 67
    assert all(_is_prime(p) for p in w.candidates[:-1])


def test_zero_sum_condition_examples():
    assert zero_sum_condition((3, 3), 3, 3, 7)
    assert not zero_sum_condition((1, 2), 3, 3, 7)
    assert zero_sum_condition((0, 0), 3, 3, 7)  # a vanishing non-empty sum


def test_condition_stabilises_beyond_sentinel():
    rng = random.Random(11)
    for _ in range(300):
        k1 = rng.randint(3, 7)
        k2 = rng.randint(3, 7)
        ell = k1 + k2 - 2
        w = prime_window(k1, k2)
        s = (rng.randint(-ell * (k1 - 2), ell * (k1 - 2)),
             rng.randint(-ell * (k2 - 2), ell * (k2 - 2)))
        integer_check = (s[0] <= 0 or s[0] >= k1) and (s[1] <= 0 or s[1] >= k2)
        for p in [w.p_max, w.p_max + 4, 2 * w.p_max + 1, 3 * w.p_max + 5]:
            assert zero_sum_condition(s, k1, k2, p) == integer_check, (s, k1, k2, p)


def test_smallest_pair_verified():
    rep = verify_pair(3, 3)
    assert rep.verified
    assert rep.region_size == 3


def test_window_shrinks_monotonically():
    seen = {}

    def hook(chosen, alive):
        depth = len(chosen)
        if depth > 0:
            parent = seen.get(depth - 1)
            if parent is not None:
                assert set(alive) <= set(parent)
        seen[depth] = alive

    rep = verify_pair(4, 4, on_node=hook)
    assert rep.verified
    assert rep.window.candidates == tuple(seen[0])


def test_symbolic_verdicts_match_concrete_sumsets():
    """Along the whole recursion, a prime stays alive iff the concrete
    multiset over Z_p^2 is still zero-sum free."""
    for k1, k2 in [(3, 3), (3, 4), (4, 4), (3, 5)]:
        window = prime_window(k1, k2).candidates
        primes = [p for p in window if _is_prime(p) and p <= 23]
        checked = 0
        mismatches = []

        def hook(chosen, alive):
            nonlocal checked
            for p in primes:
                concrete = concrete_multiset(k1, k2, chosen, p)
                dead = p not in alive
                if dead != has_zero_sum(concrete, p):
                    mismatches.append((chosen, p))
            checked += 1

        verify_pair(k1, k2, on_node=hook)
        assert checked > 0
        assert not mismatches, mismatches[:3]


def test_order_independence_of_verdict():
    rng = random.Random(4242)
    for k1, k2 in [(3, 4), (4, 4), (3, 6)]:
        base = verify_pair(k1, k2)
        pts = sorted(region_l(k1, k2).points)
        for _ in range(3):
            rng.shuffle(pts)
            rep = verify_pair(k1, k2, element_order=list(pts))
            assert rep.verified == base.verified
            assert rep.survivors == base.survivors == []


def test_verify_two_mult_small_range():
    res = verify_two_mult(10)
    assert res.verdict == "verified"
    assert len(res.pairs) == 15
    assert all(r.verified for r in res.pairs)
    assert all(not r.survivors for r in res.pairs)


def test_verify_two_mult_guards():
    with pytest.raises(ValueError):
        verify_two_mult(5)
