"""Fixed-n exhaustive search: pruning rules, verdicts, checkpoints."""

import random
from collections import defaultdict

import pytest

from zerosum2.groups import GroupElem, Modulus, MultiSet, cyclic_subgroup, neg
from zerosum2.propb import (
    BoundTable,
    CheckpointError,
    RuleSet,
    SearchConfig,
    Shard,
    TripleConstraint,
    _run_one,
    _search_pairs,
    _ShardSearch,
    iter_shards,
    prune_algo_help,
    prune_capacity,
    prune_negative_sums,
    prune_subgroup,
    run_search,
    verify_property_b,
    verify_triple_mode,
)
from zerosum2.sumsets import has_zero_sum_oracle, sigma_plus


def fresh_bounds(n, max_mult=None):
    mod = Modulus.of(n)
    return BoundTable.initial(mod, max_mult if max_mult is not None else n - 3)


# ---------------------------------------------------------------------------
# pruning operations


def test_prune_negative_sums_single_element():
    n = Modulus.of(5)
    a = MultiSet.from_pairs([((1, 0), 1)])
    out = prune_negative_sums(fresh_bounds(5), sigma_plus(a, n))
    assert out.bound(neg(GroupElem(1, 0), n)) == 0
    assert out.bound((4, 0)) == 0
    assert out.bound((1, 0)) > 0


def test_prune_negative_sums_pair():
    n = Modulus.of(5)
    a = MultiSet.from_pairs([((1, 0), 1), ((0, 1), 1)])
    out = prune_negative_sums(fresh_bounds(5), sigma_plus(a, n))
    assert out.bound((4, 4)) == 0  # negative of the pair sum
    assert out.bound((4, 0)) == 0
    assert out.bound((0, 4)) == 0


def test_prune_negative_sums_empty():
    n = Modulus.of(5)
    before = fresh_bounds(5)
    out = prune_negative_sums(before, sigma_plus(MultiSet.from_pairs([]), n))
    assert out.ub == before.ub


def test_prune_subgroup_generic_line():
    out = prune_subgroup(fresh_bounds(5), (1, 2), Modulus.of(5))
    for e in [(2, 4), (3, 1), (4, 3)]:
        assert out.bound(e) == 0
    assert out.bound((1, 2)) > 0
    # exactly the rest of the cyclic subgroup is excluded
    line = cyclic_subgroup(GroupElem(1, 2), 5)
    assert {e for e in line if out.bound(e) == 0} == set(line) - {GroupElem(1, 2)} | {GroupElem(0, 0)}


def test_prune_subgroup_axis():
    out = prune_subgroup(fresh_bounds(5), (1, 0), Modulus.of(5))
    for k in (2, 3, 4):
        assert out.bound((k, 0)) == 0
    assert out.bound((1, 0)) > 0


def test_prune_subgroup_rejects_composite():
    with pytest.raises(ValueError):
        prune_subgroup(fresh_bounds(8), (1, 0), Modulus.of(8))


def test_prune_algo_help_fires():
    # n=23, (1,0)^16 placed, adding (x,2)^3: row neighbours at distance 2
    # get capped at 2 (23 - 3*2 = 17 <= 17 and 2*3 + 16 + 22 = 44 = 2n-2)
    out = prune_algo_help(fresh_bounds(23, 20), (5, 2), k=3, m=16, n=Modulus.of(23))
    assert out.bound((7, 2)) == 2
    assert out.bound((3, 2)) == 2
    assert out.bound((5, 2)) == 20  # the element itself is not capped


def test_prune_algo_help_condition_fails():
    # n=11, m=8, k=1: 2k+m+n-1 = 20 = 2n-2 but 11 - 1 > 9: no bound
    out = prune_algo_help(fresh_bounds(11, 8), (4, 3), k=1, m=8, n=Modulus.of(11))
    assert out.bound((5, 3)) == 8
    assert out.bound((3, 3)) == 8


def test_prune_algo_help_zero_count_is_noop():
    before = fresh_bounds(11, 8)
    out = prune_algo_help(before, (4, 3), k=0, m=8, n=Modulus.of(11))
    assert out.ub == before.ub


def test_prune_capacity_examples():
    assert not prune_capacity(10, 2, 3, 11)  # 10 + 6 < 20: cut
    assert prune_capacity(18, 1, 2, 11)  # 18 + 2 = 20: continue
    assert not prune_capacity(10, 3, 0, 11)  # no lines left


# ---------------------------------------------------------------------------
# verdicts


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7])
def test_small_n_verified(n):
    r = verify_property_b(SearchConfig(n=Modulus.of(n)))
    assert r.verdict == "verified"
    assert r.counterexample is None


def test_raised_cap_finds_counterexample():
    r = verify_property_b(SearchConfig(n=Modulus.of(5), max_mult=3))
    assert r.verdict == "counterexample"
    ce = r.counterexample
    assert ce.multiset.size == 8
    assert ce.profile[0] <= 3
    assert not has_zero_sum_oracle(ce.multiset, Modulus.of(5))


def test_counterexample_survives_reported_shard_order_with_workers():
    one = verify_property_b(SearchConfig(n=Modulus.of(5), max_mult=4, workers=1))
    two = verify_property_b(SearchConfig(n=Modulus.of(5), max_mult=4, workers=2))
    assert one.verdict == two.verdict == "counterexample"
    assert one.counterexample.multiset == two.counterexample.multiset


def test_determinism_single_worker():
    a = verify_property_b(SearchConfig(n=Modulus.of(6), max_mult=5))
    b = verify_property_b(SearchConfig(n=Modulus.of(6), max_mult=5))
    assert a.verdict == b.verdict
    assert a.nodes == b.nodes
    assert a.counterexample == b.counterexample


# ---------------------------------------------------------------------------
# engine agreement and search-space reductions


def test_fast_engine_matches_reference():
    cases = [(4, None), (5, None), (6, None), (5, 4), (6, 5), (7, 5)]
    for n, cap in cases:
        cfg_fast = SearchConfig(n=Modulus.of(n), max_mult=cap, engine="fast")
        cfg_py = SearchConfig(n=Modulus.of(n), max_mult=cap, engine="python")
        ref = _ShardSearch(cfg_py)
        for sh in iter_shards(cfg_fast):
            rf = _run_one(cfg_fast, sh)
            rp = ref.run(sh)
            assert (rf.verdict, rf.nodes, rf.witness) == (rp.verdict, rp.nodes, rp.witness), (
                n,
                cap,
                sh,
            )


def test_fast_engine_matches_reference_triple():
    for p, cap in [(11, 7), (7, 5)]:
        mod = Modulus.of(p)
        tri = TripleConstraint(min_top3_sum=2 * p - 5, m1_cap=cap)
        cfg_fast = SearchConfig(n=mod, max_mult=cap, triple=tri, engine="fast")
        cfg_py = SearchConfig(n=mod, max_mult=cap, triple=tri, engine="python")
        ref = _ShardSearch(cfg_py)
        for sh in iter_shards(cfg_fast):
            rf = _run_one(cfg_fast, sh)
            rp = ref.run(sh)
            assert (rf.verdict, rf.nodes, rf.witness) == (rp.verdict, rp.nodes, rp.witness)


def profile_existence(cfg, shards):
    by_mm = defaultdict(bool)
    for sh in shards:
        r = _run_one(cfg, sh)
        by_mm[(sh.m1, sh.m2)] |= r.verdict == "counterexample"
    return dict(by_mm)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_pruned_equals_unpruned_profiles(n):
    """The four cuts never change which (m1, m2) admit a counterexample."""
    mod = Modulus.of(n)
    pruned = SearchConfig(n=mod, max_mult=n - 1, rules=RuleSet())
    plain = SearchConfig(n=mod, max_mult=n - 1, rules=RuleSet.none())
    shards = iter_shards(pruned)
    assert profile_existence(pruned, shards) == profile_existence(plain, shards)


@pytest.mark.parametrize("n", [4, 6])
def test_anchor_reductions_lose_nothing(n):
    """Thinned anchor-pair lists find exactly the same (m1, m2) profiles
    as the full normal-form lists."""
    mod = Modulus.of(n)
    cfg = SearchConfig(n=mod, max_mult=n - 1)
    reduced = profile_existence(cfg, iter_shards(cfg))
    full_pairs = _search_pairs(mod, False, False, symmetric=False)
    target = cfg.target_size()
    shards = []
    idx = 0
    for m1 in range(n - 1, 0, -1):
        for m2 in range(min(m1, target - m1), 0, -1):
            for a1, a2 in full_pairs:
                shards.append(Shard(idx, m1, m2, a1, a2))
                idx += 1
    full = profile_existence(cfg, shards)
    assert reduced == full


# ---------------------------------------------------------------------------
# checkpointing


def run_with_checkpoint(tmp_path, name, **kw):
    path = str(tmp_path / name)
    cfg = SearchConfig(n=Modulus.of(8), checkpoint_path=path, **kw)
    return cfg, run_search(cfg)


def test_checkpoint_roundtrip_and_resume(tmp_path):
    path = str(tmp_path / "n8.ckpt")
    cfg = SearchConfig(n=Modulus.of(8), max_mult=2, checkpoint_path=path)
    base = run_search(cfg)
    assert base.verdict == "verified"
    lines = open(path).read().splitlines()
    assert lines[0].startswith("#")
    assert all(len(ln.split()) == 8 for ln in lines[1:])

    rng = random.Random(42)
    for _ in range(3):
        cut = rng.randint(1, len(lines) - 1)
        with open(path, "w") as fh:
            fh.write("\n".join(lines[:cut]) + "\n")
        resumed = run_search(
            SearchConfig(n=Modulus.of(8), max_mult=2, checkpoint_path=path, resume=True)
        )
        assert resumed.verdict == base.verdict
        assert resumed.shards_total == base.shards_total


def test_checkpoint_refuses_corruption(tmp_path):
    path = str(tmp_path / "bad.ckpt")
    with open(path, "w") as fh:
        fh.write("# zerosum2-propb n=8 max_mult=5\n8 5 5 1 0 0 1 maybe\n")
    with pytest.raises(CheckpointError):
        run_search(SearchConfig(n=Modulus.of(8), checkpoint_path=path, resume=True))


def test_checkpoint_refuses_header_mismatch(tmp_path):
    path = str(tmp_path / "other.ckpt")
    with open(path, "w") as fh:
        fh.write("# zerosum2-propb n=9 max_mult=6\n")
    with pytest.raises(CheckpointError):
        run_search(SearchConfig(n=Modulus.of(8), checkpoint_path=path, resume=True))


def test_checkpoint_refuses_silent_overwrite(tmp_path):
    path = str(tmp_path / "exists.ckpt")
    open(path, "w").write("# zerosum2-propb n=8 max_mult=5\n")
    with pytest.raises(CheckpointError):
        run_search(SearchConfig(n=Modulus.of(8), checkpoint_path=path, resume=False))


def test_resume_replays_recorded_counterexample(tmp_path):
    path = str(tmp_path / "ce.ckpt")
    cfg = SearchConfig(n=Modulus.of(5), max_mult=4, checkpoint_path=path)
    first = run_search(cfg)
    assert first.verdict == "counterexample"
    resumed = run_search(
        SearchConfig(n=Modulus.of(5), max_mult=4, checkpoint_path=path, resume=True)
    )
    assert resumed.verdict == "counterexample"
    assert resumed.counterexample.multiset == first.counterexample.multiset


# ---------------------------------------------------------------------------
# triple mode


def test_triple_small_primes_verified():
    for p in (7, 11, 13):
        r = verify_triple_mode(Modulus.of(p))
        assert r.verdict == "verified", p


def test_triple_positive_control():
    r = verify_triple_mode(Modulus.of(7), m1_cap=5)
    assert r.verdict == "counterexample"
    ce = r.counterexample
    assert ce.profile[0] <= 5
    assert sum(ce.profile[:3]) >= 2 * 7 - 5
    assert not has_zero_sum_oracle(ce.multiset, Modulus.of(7))


def test_triple_rejects_composite():
    with pytest.raises(ValueError):
        verify_triple_mode(Modulus.of(9))
