"""Lemma certification checks at test scale (wider ranges run in acceptance)."""

import pytest

from zerosum2.lemmas import (
    check_cauchy_davenport,
    check_coset_lemma,
    check_ksubsets,
    check_olson,
    check_olson_fmc,
    check_olson_size,
    check_onedim,
    check_compact_cover,
    compact_cover,
    davenport_constant,
    subset_sums_1d,
)


def test_olson_fmc_bound_formula():
    r = check_olson_fmc(11, 3)
    assert r.ok
    assert r.extremal["bound"] == 7


def test_olson_fmc_direct_sumset():
    assert len(subset_sums_1d([1, 2, 4], 13)) == 8  # all of 0..7


def test_olson_fmc_small_range():
    for p in (3, 5, 7, 11, 13):
        for s in range(1, 6):
            r = check_olson_fmc(p, s)
            assert r.ok, (p, s, r.violations[:2])


def test_olson_interval_is_near_extremal():
    # A = {1..k}: all sums 0..k(k+1)/2 are hit and nothing else
    for p, k in [(11, 3), (13, 4)]:
        sums = subset_sums_1d(range(1, k + 1), p)
        assert len(sums) == min(p, k * (k + 1) // 2 + 1)


def test_olson_examples():
    r = check_olson(11, 2)
    assert r.ok
    assert r.extremal["bound"] == 4
    assert len(subset_sums_1d([1, 3], 11)) == 4
    r = check_olson(7, 3)
    assert r.ok
    assert r.extremal["bound"] == 5


def test_olson_small_range():
    for p in (5, 7, 11):
        for s in range(1, (p - 1) // 2 + 1):
            assert check_olson(p, s).ok, (p, s)


def test_olson_size_small():
    for p in (5, 7, 11):
        assert check_olson_size(p).ok, p


def test_compact_cover_identity():
    out = compact_cover(range(5), 0, 5)
    assert sorted(out) == [0, 1, 2, 3, 4]


def test_compact_cover_sparse():
    out = compact_cover([0, 4, 8], 3, 11)
    assert set(out) <= {0, 4, 8}
    assert len(out) <= 2 * -(-12 // 5) - 1


def test_compact_cover_rejects_non_cover():
    with pytest.raises(ValueError):
        compact_cover([0, 1], 2, 11)


def test_compact_cover_randomised():
    for p in (11, 17, 23, 31):
        r = check_compact_cover(p, trials=150, seed=3)
        assert r.ok and r.cases > 0, p


def test_coset_lemma_exhaustive_n5():
    r = check_coset_lemma(5)
    assert r.ok
    assert r.cases > 0


def test_coset_family_satisfies_conclusion():
    n = 6
    family_mults = [n - 1] + [1] * (n - 1)
    assert max(family_mults) >= n - 2


def test_davenport_tiny():
    assert davenport_constant(2) == 3
    assert davenport_constant(3) == 5


def test_ksubsets_examples():
    r = check_ksubsets(7)
    assert r.ok
    # {1,2,3}, k=2: sums of pairs are {3,4,5}, meeting min(7, 2*1+1) = 3
    from zerosum2.sumsets import sigma_k

    assert sigma_k([1, 2, 3], 2, 7) == {3, 4, 5}
    assert sigma_k([1, 2, 3], 3, 7) == {6}


def test_onedim_exhaustive():
    for p in (3, 5, 7):
        assert check_onedim(p).ok, p


def test_cauchy_davenport_exhaustive():
    for p in (3, 5):
        assert check_cauchy_davenport(p).ok, p


def test_reports_are_reproducible():
    a = check_olson_fmc(11, 4)
    b = check_olson_fmc(11, 4)
    assert (a.cases, a.violations, a.extremal) == (b.cases, b.violations, b.extremal)


def test_lemma_guards():
    with pytest.raises(ValueError):
        check_olson_fmc(9, 3)  # composite
    with pytest.raises(ValueError):
        check_olson_fmc(11, 8)  # size beyond the asserted range
    with pytest.raises(ValueError):
        davenport_constant(6)
    with pytest.raises(ValueError):
        check_ksubsets(17)
