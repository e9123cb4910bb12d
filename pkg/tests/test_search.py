"""Antichain and search-loop tests."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neurodim import (
    Antichain,
    EnumerationTooLarge,
    SearchConfig,
    exhaustive_search,
    frontier_search,
    implied_filling,
    implied_nonfilling,
)
from neurodim.search import leq, result_csv_rows


def test_leq():
    assert leq((1, 2), (1, 3))
    assert leq((2, 2), (2, 2))
    assert not leq((2, 1), (1, 2))
    assert not leq((1, 5), (2, 4))


def test_implied_checks_examples():
    f_min = Antichain([(2, 3)])
    assert implied_filling((3, 3), f_min)
    assert not implied_filling((2, 2), f_min)
    n_max = Antichain([(2, 4)])
    assert not implied_nonfilling((1, 5), n_max)
    assert implied_nonfilling((2, 3), n_max)


def test_antichain_insert_examples():
    f = Antichain([(3, 3)])
    assert f.insert_minimal((2, 3))
    assert f.members == ((2, 3),)
    n = Antichain([(2, 2)])
    assert n.insert_maximal((2, 4))
    assert n.members == ((2, 4),)
    both = Antichain([(2, 3)])
    assert both.insert_minimal((3, 2))
    assert both.members == ((2, 3), (3, 2))


def test_antichain_rejects_comparable_constructor():
    with pytest.raises(ValueError):
        Antichain([(1, 2), (2, 3)])


tuples = st.lists(
    st.tuples(st.integers(1, 5), st.integers(1, 5), st.integers(1, 5)), min_size=1, max_size=30
)


@settings(max_examples=80, deadline=None)
@given(seq=tuples)
def test_antichain_minimal_invariants(seq):
    chain = Antichain()
    inserted = []
    for a in seq:
        if chain.insert_minimal(a):
            inserted.append(a)
    members = chain.members
    for x in members:
        for y in members:
            if x != y:
                assert not leq(x, y) and not leq(y, x)
    # every insert attempt is dominated by (or equal to) some member
    for a in seq:
        assert chain.any_leq(a)
    # members are the minimal elements of everything seen
    for m in members:
        assert not any(leq(a, m) and a != m for a in seq)


@settings(max_examples=80, deadline=None)
@given(seq=tuples)
def test_antichain_maximal_invariants(seq):
    chain = Antichain()
    for a in seq:
        chain.insert_maximal(a)
    members = chain.members
    for x in members:
        for y in members:
            if x != y:
                assert not leq(x, y) and not leq(y, x)
    for a in seq:
        assert chain.any_geq(a)
    for m in members:
        assert not any(leq(m, a) and a != m for a in seq)


# ---------------------------------------------------------------------------
# frontier search
# ---------------------------------------------------------------------------


def config(depth, wmax, budget=200, **kw):
    return SearchConfig(
        depth=depth, d0=2, d_last=1, width_min=1, width_max=wmax, r=2, budget=budget, **kw
    )


def test_frontier_depth2_golden():
    res = frontier_search(config(2, 4, budget=60))
    assert res.f_min.members == ((2,),)
    assert res.minimal_filling_architectures() == ((2, 2, 1),)


def test_frontier_depth3_golden():
    res = frontier_search(config(3, 4, budget=250))
    assert res.f_min.members == ((2, 2),)


def test_frontier_reproducible():
    a = frontier_search(config(3, 4, budget=150, seed=9))
    b = frontier_search(config(3, 4, budget=150, seed=9))
    assert a.f_min.members == b.f_min.members
    assert a.n_max.members == b.n_max.members
    assert a.trace == b.trace


def test_frontier_seed_changes_trace():
    a = frontier_search(config(3, 4, budget=40, seed=1))
    b = frontier_search(config(3, 4, budget=40, seed=2))
    assert [e.hidden for e in a.trace] != [e.hidden for e in b.trace]


def test_frontier_antichain_consistency():
    res = frontier_search(config(4, 4, budget=400, seed=3))
    for f in res.f_min.members:
        for q in res.n_max.members:
            assert not leq(f, q), (f, q)
    # every filling classification dominates a final minimal member
    for ev in res.trace:
        if ev.filling:
            assert res.f_min.any_leq(ev.hidden)
        elif ev.filling is False:
            assert res.n_max.any_geq(ev.hidden)


def test_frontier_budget_modes():
    proposals = frontier_search(config(3, 4, budget=30, budget_mode="proposals"))
    assert len(proposals.trace) <= 30
    tests = frontier_search(config(3, 4, budget=5, budget_mode="tests"))
    assert tests.tests <= 5


def test_frontier_warm_start_skips_tests():
    cold = frontier_search(config(3, 4, budget=200, seed=4))
    warm = frontier_search(
        config(3, 4, budget=200, seed=4),
        warm_filling=cold.f_min.members,
        warm_nonfilling=cold.n_max.members,
    )
    assert warm.tests <= cold.tests
    assert warm.f_min.members == cold.f_min.members


def test_frontier_registry_warm_start():
    cfg = config(3, 4, budget=200, seed=4)
    first = frontier_search(cfg)
    again = frontier_search(cfg, registry=first.registry)
    assert again.tests == 0
    assert again.f_min.members == first.f_min.members


# ---------------------------------------------------------------------------
# exhaustive search
# ---------------------------------------------------------------------------


def test_exhaustive_depth4_golden():
    res = exhaustive_search(config(4, 4))
    assert res.minimal_filling_architectures() == ((2, 3, 3, 2, 1),)


def test_exhaustive_depth5_golden():
    res = exhaustive_search(config(5, 4))
    assert res.minimal_filling_architectures() == ((2, 3, 3, 3, 2, 1),)


def test_exhaustive_empty_box():
    cfg = SearchConfig(depth=3, d0=2, d_last=1, width_min=4, width_max=3, r=2)
    res = exhaustive_search(cfg)
    assert res.f_min.members == () and res.n_max.members == ()


def test_exhaustive_cap():
    cfg = SearchConfig(
        depth=8, d0=2, d_last=1, width_min=1, width_max=9, r=2, enumeration_cap=1000
    )
    with pytest.raises(EnumerationTooLarge):
        exhaustive_search(cfg)


def test_exhaustive_pruning_equivalence():
    # same box, antichain/bound pruning on vs exhaustive rank testing
    cfg = config(3, 4)
    pruned = exhaustive_search(cfg, prune=True)
    full = exhaustive_search(cfg, prune=False)
    assert pruned.f_min.members == full.f_min.members
    assert pruned.n_max.members == full.n_max.members
    assert pruned.tests <= full.tests


def test_exhaustive_consistency_invariants():
    res = exhaustive_search(config(4, 3))
    for f in res.f_min.members:
        for q in res.n_max.members:
            assert not leq(f, q)


def test_csv_rows_schema():
    res = exhaustive_search(config(3, 3))
    rows = result_csv_rows(res)
    assert rows, "expected at least one row"
    want_keys = [
        "r", "depth", "architecture", "class", "unimodal", "ambient_dim",
        "rank_lower", "upper_bound", "prime", "trials", "seed",
    ]
    for row in rows:
        assert list(row) == want_keys
    classes = {row["class"] for row in rows}
    assert "minimal_filling" in classes
    assert "maximal_nonfilling" in classes
    snapshot = [r for r in rows if r["class"] == "minimal_filling"]
    assert snapshot[0]["architecture"] == "2-2-2-1"


def test_search_determinism_across_runs():
    cfg = config(4, 4)
    a = exhaustive_search(cfg)
    b = exhaustive_search(cfg)
    assert a.f_min.members == b.f_min.members
    assert a.n_max.members == b.n_max.members
