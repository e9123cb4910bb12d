"""Acceptance suite: one test per exit criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s`.  Criterion 7 (the depth-7
census) takes minutes and is marked slow: `pytest -m slow tests/test_acceptance.py`.
"""

import json
import time

import numpy as np
import pytest

from neurodim import (
    Antichain,
    Architecture,
    DualElement,
    FieldElement,
    Prime,
    SearchConfig,
    WeightAssignment,
    ambient_dim,
    exhaustive_search,
    frontier_search,
    generic_rank,
    jacobian_at,
    monomial_basis,
    param_bound,
    poly_mul,
    poly_pow,
)
from neurodim.certify import (
    BOUNDS_TABLE,
    COUNTEREXAMPLE_WIDTHS,
    DEPTH9_CODIMS,
    DEPTH9_WIDTHS,
    FILLING_STOCK,
    MFA_CENSUS,
    certify_mfa,
    defect_report,
    stock_registry,
)
from neurodim.cli import main
from neurodim.pnn import is_unimodal
from neurodim.search import leq
from .helpers import oracle_jacobian, random_small_architecture, small_param_architectures

BIG = Prime(2**31 - 1)


def _pass(n, message):
    print(f"\nACCEPTANCE criterion {n}: PASS - {message}")


def test_criterion_1_counterexample_filling(capsys):
    t0 = time.time()
    code = main(
        ["dim", "--arch", "2-3-4-5-4-6-4-1", "--r", "2", "--trials", "3", "--format", "json"]
    )
    elapsed = time.time() - t0
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["rank_lower"] == 65 == out["ambient"]
    assert out["status"] == "certified_filling"
    assert out["prime"] == 2**31 - 1
    assert elapsed < 10, f"took {elapsed:.1f}s"
    with capsys.disabled():
        _pass(1, f"rank 65 = ambient certified in {elapsed:.2f}s")


def test_criterion_2_reported_dimensions_seed_stable(capsys):
    t0 = time.time()
    want = (35, 60, 62, 39, 61, 59)
    for seed in (0, 1, 2):
        got = tuple(
            generic_rank(Architecture(w, 2), trials=3, seed=seed).rank_lower
            for w, _, _ in BOUNDS_TABLE
        )
        assert got == want, (seed, got)
    elapsed = time.time() - t0
    assert elapsed < 60
    with capsys.disabled():
        _pass(2, f"decrement ranks {want} stable across 3 seeds in {elapsed:.1f}s")


def test_criterion_3_certified_bounds(capsys, tmp_path):
    facts = tmp_path / "facts.json"
    stock_registry(recertify=True).save(str(facts))
    t0 = time.time()
    got = []
    for widths, _, _ in BOUNDS_TABLE:
        arch_text = "-".join(map(str, widths))
        code = main(
            ["bound", "--arch", arch_text, "--r", "2", "--facts", str(facts), "--format", "json"]
        )
        assert code == 0
        got.append(json.loads(capsys.readouterr().out)["upper_bound"])
    elapsed = time.time() - t0
    assert tuple(got) == (53, 61, 63, 39, 62, 62)
    assert elapsed < 1, f"bounds took {elapsed:.2f}s"
    with capsys.disabled():
        _pass(3, f"bounds (53, 61, 63, 39, 62, 62) in {elapsed:.2f}s")


def test_criterion_4_filling_stock(capsys):
    t0 = time.time()
    for widths, dim in FILLING_STOCK:
        arch = Architecture(widths, 2)
        est = generic_rank(arch, trials=3, seed=0)
        assert est.certified_filling, widths
        assert est.rank_lower == dim == ambient_dim(arch), widths
    elapsed = time.time() - t0
    assert elapsed < 30
    with capsys.disabled():
        _pass(4, f"7 filling architectures certified at their ambient dims in {elapsed:.1f}s")


def test_criterion_5_mfa_certification(capsys, tmp_path):
    facts = tmp_path / "facts.json"
    stock_registry(recertify=True).save(str(facts))
    t0 = time.time()
    code = main(
        ["certify", "--arch", "2-3-4-5-4-6-4-1", "--r", "2", "--facts", str(facts), "--format", "json"]
    )
    elapsed = time.time() - t0
    data = json.loads(capsys.readouterr().out)
    assert code == 0
    assert data["filling_evidence"]["rank_lower"] == 65
    assert data["filling_evidence"]["certified_filling"] is True
    assert data["unimodal"] is False
    decs = data["decrement_results"]
    assert len(decs) == 6
    d4 = decs[3]
    assert d4["arch"] == "2-3-4-5-3-6-4-1"
    assert d4["upper_bound"] == 39
    for d in decs:
        assert d["status"] in ("certified_nonfilling", "certified_exact")
        assert d["rank_lower"] < 65
    assert data["overall"] in ("mfa_certified", "mfa_reported")
    assert data["overall"] == "mfa_certified"
    assert elapsed < 120
    with capsys.disabled():
        _pass(5, f"counterexample certified minimal filling, non-unimodal in {elapsed:.1f}s")


def test_criterion_6_small_depth_census(capsys):
    t0 = time.time()
    for depth in (2, 3, 4, 5):
        config = SearchConfig(depth=depth, d0=2, d_last=1, width_min=1, width_max=5, r=2)
        result = exhaustive_search(config)
        assert result.minimal_filling_architectures() == MFA_CENSUS[depth], depth
    elapsed = time.time() - t0
    assert elapsed < 300
    with capsys.disabled():
        _pass(6, f"censuses L=2..5 reproduced in {elapsed:.1f}s")


@pytest.mark.slow
def test_criterion_7_depth7_census(capsys):
    t0 = time.time()
    config = SearchConfig(
        depth=7, d0=2, d_last=1, width_min=1, width_max=7, r=2, enumeration_cap=200_000
    )
    result = exhaustive_search(config)
    got = result.minimal_filling_architectures()
    elapsed = time.time() - t0
    assert tuple(sorted(got)) == tuple(sorted(MFA_CENSUS[7]))
    non_unimodal = [a for a in got if not is_unimodal(a)]
    assert non_unimodal == [COUNTEREXAMPLE_WIDTHS]
    with capsys.disabled():
        _pass(7, f"13 depth-7 MFAs, one non-unimodal, in {elapsed:.0f}s ({result.tests} rank tests)")


def test_criterion_8_depth9_example(capsys):
    t0 = time.time()
    arch = Architecture(DEPTH9_WIDTHS, 2)
    assert ambient_dim(arch) == 514
    codims = []
    for i in range(1, arch.depth):
        rep = defect_report(arch.decrement(i), trials=3, seed=0)
        assert rep.expected_dim == 514  # expected dim of every decrement is ambient
        assert rep.defect == rep.codim
        codims.append(rep.codim)
    elapsed = time.time() - t0
    assert tuple(codims) == DEPTH9_CODIMS
    assert elapsed < 600
    with capsys.disabled():
        _pass(8, f"depth-9 codimension vector {DEPTH9_CODIMS} in {elapsed:.1f}s")


def test_criterion_9_property_suites(capsys):
    t0 = time.time()
    rng = np.random.default_rng(2024)

    # field axioms at both primes
    for prime in (Prime(101), BIG):
        for _ in range(40):
            a, b, c = (FieldElement(int(v), prime) for v in rng.integers(0, prime.p, 3))
            assert (a + b) + c == a + (b + c)
            assert a * (b + c) == a * b + a * c
            assert (a * b) * c == a * (b * c)
            if a.value:
                assert a * a.inverse() == 1

    # dual-number derivative law
    for _ in range(40):
        a, b = (int(v) for v in rng.integers(0, BIG.p, 2))
        r = int(rng.integers(1, 17))
        d = DualElement(FieldElement(a, BIG), FieldElement(b, BIG)) ** r
        assert d.infinitesimal.value == r * pow(a, r - 1, BIG.p) * b % BIG.p

    # polynomial ring laws
    small = Prime(101)
    for _ in range(8):
        n = int(rng.integers(1, 4))
        polys = []
        for _ in range(3):
            deg = int(rng.integers(0, 4))
            basis = monomial_basis(n, deg)
            from neurodim import HomPoly

            polys.append(HomPoly(basis, small, rng.integers(0, small.p, len(basis))))
        a, b, c = polys
        assert poly_mul(a, b) == poly_mul(b, a)
        assert poly_mul(poly_mul(a, b), c) == poly_mul(a, poly_mul(b, c))
        assert poly_pow(a, 3) == poly_mul(a, poly_mul(a, a))

    # basis index round-trips
    for n in range(1, 5):
        for deg in range(0, 17):
            basis = monomial_basis(n, deg)
            for i, e in enumerate(basis.exponents):
                assert basis.index_of(e) == i

    # rank bounded by min(ambient, params) on 200 random architectures
    for k in range(200):
        arch = random_small_architecture(rng)
        est = generic_rank(arch, trials=1, seed=k)
        assert est.rank_lower <= min(ambient_dim(arch), param_bound(arch)), arch

    # depth-1 exactness
    for m in range(1, 7):
        for n in range(1, 7):
            assert generic_rank(Architecture((m, n), 2), trials=1).rank_lower == m * n

    # monotonicity along the subarchitecture order (fixed corpus)
    pairs = [
        ((2, 1, 1), (2, 2, 1)),
        ((2, 2, 2, 1), (2, 3, 3, 1)),
        ((2, 3, 3, 2, 1), (2, 3, 4, 2, 1)),
        ((2, 2, 4, 5, 4, 6, 4, 1), (2, 3, 4, 5, 4, 6, 4, 1)),
    ]
    for lo, hi in pairs:
        assert (
            generic_rank(Architecture(lo, 2)).rank_lower
            <= generic_rank(Architecture(hi, 2)).rank_lower
        )

    # antichain invariants under random insert sequences
    for _ in range(200):
        chain = Antichain()
        seen = []
        for _ in range(int(rng.integers(1, 20))):
            a = tuple(int(v) for v in rng.integers(1, 5, 3))
            chain.insert_minimal(a)
            seen.append(a)
        members = chain.members
        for x in members:
            for y in members:
                assert x == y or (not leq(x, y) and not leq(y, x))
        for a in seen:
            assert chain.any_leq(a)

    # frontier-search determinism per seed
    config = SearchConfig(
        depth=3, d0=2, d_last=1, width_min=1, width_max=4, r=2, budget=120, seed=7
    )
    first, second = frontier_search(config), frontier_search(config)
    assert first.trace == second.trace
    assert first.f_min.members == second.f_min.members

    # pruning on/off equivalence on an L=3 box
    config = SearchConfig(depth=3, d0=2, d_last=1, width_min=1, width_max=4, r=2)
    assert (
        exhaustive_search(config, prune=True).f_min.members
        == exhaustive_search(config, prune=False).f_min.members
    )

    elapsed = time.time() - t0
    assert elapsed < 300
    with capsys.disabled():
        _pass(9, f"property suites in {elapsed:.1f}s")


def test_criterion_10_symbolic_oracle(capsys):
    t0 = time.time()
    prime = Prime(257)
    rng = np.random.default_rng(5)
    archs = small_param_architectures(max_params=6, rs=(1, 2, 3))
    checked = 0
    for arch in archs:
        mats = [
            rng.integers(0, prime.p, size=(arch.widths[k + 1], arch.widths[k]))
            for k in range(arch.depth)
        ]
        got = jacobian_at(arch, WeightAssignment(mats, prime))
        want = oracle_jacobian(arch, mats, prime.p)
        assert np.array_equal(got, want), arch
        checked += 1
    # the hand-derived depth-2 Jacobian
    arch = Architecture((2, 1, 1), 2)
    wa = WeightAssignment([np.array([[1, 1]]), np.array([[1]])], prime)
    assert np.array_equal(
        jacobian_at(arch, wa), np.array([[2, 0, 1], [2, 2, 2], [0, 2, 1]])
    )
    elapsed = time.time() - t0
    assert elapsed < 60, f"oracle sweep took {elapsed:.1f}s"
    with capsys.disabled():
        _pass(10, f"symbolic oracle agreement on {checked} architectures in {elapsed:.1f}s")
