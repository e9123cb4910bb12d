"""Frontier and exhaustive search for minimal filling architectures.

Hidden-width tuples are ordered componentwise; dimensions are monotone along
this order, so one filling certificate rules out everything above it and one
non-filling verdict rules out everything below.  The search keeps a minimal
filling antichain and a maximal non-filling antichain and only spends rank
computations on unresolved tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import DEFAULT_PRIME, Prime
from .bounds import DimensionFact, FactsRegistry
from .errors import EnumerationTooLarge
from .pnn import Architecture, ambient_dim, format_architecture, is_unimodal, param_bound
from .rank import generic_rank

__all__ = [
    "Antichain",
    "SearchConfig",
    "SearchResult",
    "TraceEvent",
    "implied_filling",
    "implied_nonfilling",
    "frontier_search",
    "exhaustive_search",
    "result_csv_rows",
    "CSV_HEADER",
]

# Spawn key separating the proposal stream from per-trial weight streams.
_PROPOSAL_STREAM = 0x5EED


def leq(a, b) -> bool:
    """Componentwise partial order on equal-length width tuples."""
    return len(a) == len(b) and all(x <= y for x, y in zip(a, b))


class Antichain:
    """Set of pairwise-incomparable hidden-width tuples."""

    def __init__(self, members=()):
        self._members: set[tuple[int, ...]] = set()
        for m in members:
            m = tuple(m)
            if self.any_leq(m) or self.any_geq(m):
                raise ValueError(f"{m} is comparable to an existing member")
            self._members.add(m)

    @property
    def members(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(self._members))

    def __len__(self):
        return len(self._members)

    def __contains__(self, a):
        return tuple(a) in self._members

    def any_leq(self, a) -> bool:
        """Is some member <= a?"""
        return any(leq(m, a) for m in self._members)

    def any_geq(self, a) -> bool:
        """Is some member >= a?"""
        return any(leq(a, m) for m in self._members)

    def insert_minimal(self, a) -> bool:
        """Insert keeping only minimal elements; no-op if a is already implied."""
        a = tuple(a)
        if self.any_leq(a):
            return False
        self._members = {m for m in self._members if not leq(a, m)}
        self._members.add(a)
        return True

    def insert_maximal(self, a) -> bool:
        """Insert keeping only maximal elements; no-op if a is already implied."""
        a = tuple(a)
        if self.any_geq(a):
            return False
        self._members = {m for m in self._members if not leq(m, a)}
        self._members.add(a)
        return True

    def __repr__(self):
        return f"Antichain({sorted(self._members)})"


def implied_filling(a, f_min: Antichain) -> bool:
    """True iff a dominates a known filling tuple."""
    return f_min.any_leq(a)


def implied_nonfilling(a, n_max: Antichain) -> bool:
    """True iff a is dominated by a known non-filling tuple."""
    return n_max.any_geq(a)


@dataclass(frozen=True)
class SearchConfig:
    """Box and budget for a hidden-width search with fixed endpoints."""

    depth: int
    d0: int
    d_last: int
    width_min: int
    width_max: int
    r: int
    budget: int = 1000
    seed: int = 0
    prime: Prime = DEFAULT_PRIME
    trials: int = 3
    budget_mode: str = "proposals"  # or "tests": only rank computations count
    enumeration_cap: int = 300_000

    def __post_init__(self):
        if self.depth < 2:
            raise ValueError("search needs at least one hidden layer (depth >= 2)")
        if self.width_min < 1:
            raise ValueError("width_min must be positive")
        if self.budget < 1:
            raise ValueError("budget must be positive")
        if self.budget_mode not in ("proposals", "tests"):
            raise ValueError("budget_mode must be 'proposals' or 'tests'")

    @property
    def hidden_len(self) -> int:
        return self.depth - 1

    @property
    def box_size(self) -> int:
        span = self.width_max - self.width_min + 1
        return span ** self.hidden_len if span > 0 else 0

    def architecture(self, hidden) -> Architecture:
        return Architecture((self.d0, *hidden, self.d_last), self.r)


@dataclass(frozen=True)
class TraceEvent:
    step: int
    hidden: tuple[int, ...]
    action: str  # proposed|duplicate|implied_filling|implied_nonfilling|pruned_bound|tested
    filling: bool | None = None
    rank_lower: int | None = None


@dataclass
class SearchResult:
    config: SearchConfig
    f_min: Antichain
    n_max: Antichain
    trace: list[TraceEvent] = field(default_factory=list)
    registry: FactsRegistry = field(default_factory=FactsRegistry)
    tests: int = 0

    def minimal_filling_architectures(self) -> tuple[tuple[int, ...], ...]:
        c = self.config
        return tuple((c.d0, *h, c.d_last) for h in self.f_min.members)


def _classify(config: SearchConfig, hidden, registry: FactsRegistry):
    """(filling, rank_lower, upper_bound) for one tuple, reusing stored facts.

    Tuples whose parameter bound undershoots the ambient dimension cannot be
    filling and are classified without a rank computation (rank_lower 0).
    """
    arch = config.architecture(hidden)
    amb = ambient_dim(arch)
    fact = registry.get(arch.widths, config.r)
    if fact is not None:
        if fact.rank_lower == amb:
            return True, fact.rank_lower, fact.upper_bound, False
        if fact.nonfilling_certified or fact.rank_lower > 0:
            # A reported rank below ambient counts as non-filling for search
            # purposes; warm-started runs reuse it instead of re-testing.
            return False, fact.rank_lower, fact.upper_bound, False
    pb = param_bound(arch)
    if pb < amb:
        registry.merge(DimensionFact.fresh(arch, provenance={"method": "param_bound"}))
        return False, 0, pb, False
    est = generic_rank(arch, config.prime, config.trials, config.seed)
    registry.merge(DimensionFact.from_rank(est))
    return est.certified_filling, est.rank_lower, min(amb, pb), True


def frontier_search(
    config: SearchConfig,
    warm_filling=(),
    warm_nonfilling=(),
    registry: FactsRegistry | None = None,
) -> SearchResult:
    """Randomized frontier search over the hidden-width box.

    Fully reproducible from the seed: proposals come from a dedicated
    sub-stream and per-tuple rank trials from their own (seed, trial)
    streams.  Warm-start antichains and an existing facts registry are
    honored before any proposal is drawn.
    """
    registry = registry if registry is not None else FactsRegistry()
    f_min = Antichain()
    n_max = Antichain()
    for h in warm_filling:
        f_min.insert_minimal(tuple(h))
    for h in warm_nonfilling:
        n_max.insert_maximal(tuple(h))

    result = SearchResult(config, f_min, n_max, registry=registry)
    if config.width_min > config.width_max:
        return result

    ss = np.random.SeedSequence(entropy=int(config.seed), spawn_key=(_PROPOSAL_STREAM,))
    rng = np.random.Generator(np.random.PCG64(ss))
    resolved: set[tuple[int, ...]] = set()
    spent = 0
    stagnation = 0
    stagnation_cap = max(1000, 50 * config.box_size)

    while spent < config.budget:
        hidden = tuple(
            int(v) for v in rng.integers(config.width_min, config.width_max + 1, config.hidden_len)
        )
        step = spent
        if config.budget_mode == "proposals":
            spent += 1
        else:
            stagnation += 1
            if stagnation > stagnation_cap:
                break

        if hidden in resolved:
            result.trace.append(TraceEvent(step, hidden, "duplicate"))
            continue
        if implied_filling(hidden, f_min):
            resolved.add(hidden)
            result.trace.append(TraceEvent(step, hidden, "implied_filling", filling=True))
            continue
        if implied_nonfilling(hidden, n_max):
            resolved.add(hidden)
            result.trace.append(TraceEvent(step, hidden, "implied_nonfilling", filling=False))
            continue

        filling, rank_lower, _, tested = _classify(config, hidden, registry)
        if tested:
            result.tests += 1
            stagnation = 0
            if config.budget_mode == "tests":
                spent += 1
        resolved.add(hidden)
        action = "tested" if tested else "pruned_bound"
        result.trace.append(TraceEvent(step, hidden, action, filling=filling, rank_lower=rank_lower))
        if filling:
            f_min.insert_minimal(hidden)
        else:
            n_max.insert_maximal(hidden)
        if len(resolved) == config.box_size:
            break
    return result


def exhaustive_search(
    config: SearchConfig,
    prune: bool = True,
    registry: FactsRegistry | None = None,
) -> SearchResult:
    """Classify every tuple in the box; exact antichains for the whole box.

    Enumeration ascends by coordinate sum (a linear extension of dominance),
    so every tuple below a candidate is classified first and the minimal
    filling antichain can prune the entire region above itself.  With
    ``prune=False`` every tuple is rank-tested; the resulting antichains must
    agree with the pruned run.
    """
    registry = registry if registry is not None else FactsRegistry()
    if config.box_size > config.enumeration_cap:
        raise EnumerationTooLarge(
            f"box has {config.box_size} tuples, cap is {config.enumeration_cap}"
        )
    f_min = Antichain()
    n_max = Antichain()
    result = SearchResult(config, f_min, n_max, registry=registry)
    if config.width_min > config.width_max:
        return result

    span = range(config.width_min, config.width_max + 1)
    ordered = sorted(itertools.product(span, repeat=config.hidden_len), key=lambda h: (sum(h), h))
    classified: dict[tuple[int, ...], bool] = {}

    # Ascending coordinate sum means no previously classified tuple can
    # dominate the current one, so only the minimal filling antichain prunes.
    for step, hidden in enumerate(ordered):
        if prune and implied_filling(hidden, f_min):
            classified[hidden] = True
            continue
        if prune:
            filling, rank_lower, _, tested = _classify(config, hidden, registry)
        else:
            arch = config.architecture(hidden)
            est = generic_rank(arch, config.prime, config.trials, config.seed)
            registry.merge(DimensionFact.from_rank(est))
            filling, rank_lower, tested = est.certified_filling, est.rank_lower, True
        classified[hidden] = filling
        if tested:
            result.tests += 1
        result.trace.append(
            TraceEvent(step, hidden, "tested" if tested else "pruned_bound",
                       filling=filling, rank_lower=rank_lower)
        )
        if filling:
            f_min.insert_minimal(hidden)

    # In-box maximal non-filling tuples: all covers inside the box are filling.
    # (classified is a down-set, so checking the covers suffices.)
    n_max_final = Antichain()
    for hidden, filling in classified.items():
        if filling:
            continue
        maximal = True
        for i in range(len(hidden)):
            cover = list(hidden)
            cover[i] += 1
            key = tuple(cover)
            if key in classified and not classified[key]:
                maximal = False
                break
        if maximal:
            n_max_final.insert_maximal(hidden)
    result.n_max = n_max_final

    # Recompute minimal filling tuples the same way for the prune=False path.
    f_min_final = Antichain()
    for hidden, filling in classified.items():
        if not filling:
            continue
        minimal = True
        for i in range(len(hidden)):
            dec = list(hidden)
            dec[i] -= 1
            key = tuple(dec)
            if key in classified and classified[key]:
                minimal = False
                break
        if minimal:
            f_min_final.insert_minimal(hidden)
    result.f_min = f_min_final
    return result


CSV_HEADER = (
    "r,depth,architecture,class,unimodal,ambient_dim,rank_lower,upper_bound,prime,trials,seed"
)


def result_csv_rows(result: SearchResult) -> list[dict]:
    """One row per explicitly classified architecture plus antichain snapshots."""
    config = result.config
    rows = []

    def row(hidden, cls, rank_lower):
        arch = config.architecture(hidden)
        fact = result.registry.get(arch.widths, config.r)
        upper = fact.upper_bound if fact is not None else min(ambient_dim(arch), param_bound(arch))
        return {
            "r": config.r,
            "depth": config.depth,
            "architecture": format_architecture(arch.widths),
            "class": cls,
            "unimodal": is_unimodal(arch),
            "ambient_dim": ambient_dim(arch),
            "rank_lower": rank_lower if rank_lower is not None else 0,
            "upper_bound": upper,
            "prime": config.prime.p,
            "trials": config.trials,
            "seed": config.seed,
        }

    for ev in result.trace:
        if ev.action in ("tested", "pruned_bound"):
            rows.append(row(ev.hidden, "filling" if ev.filling else "nonfilling", ev.rank_lower))
    for hidden in result.f_min.members:
        fact = result.registry.get(result.config.architecture(hidden).widths, config.r)
        rows.append(row(hidden, "minimal_filling", fact.rank_lower if fact else None))
    for hidden in result.n_max.members:
        fact = result.registry.get(result.config.architecture(hidden).widths, config.r)
        rows.append(row(hidden, "maximal_nonfilling", fact.rank_lower if fact else None))
    return rows
