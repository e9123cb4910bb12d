"""Certified upper bounds on neurovariety dimension and the facts registry.

Three bound sources combine: the ambient dimension, the parameter bound,
and the split inequality dim(d) <= dim(d[0..k]) + dim(d[k..L]) - d_k.  A
registry of certified facts (exact dimensions of filling architectures,
or previously proved upper bounds) feeds the recursion.

When fact routing is on (the default), any section of the width sequence
that properly contains a certified fact is decomposed until the fact enters
the derivation, instead of being closed off by its own ambient/parameter
bound.  This mirrors how such bounds are assembled by hand from a stock of
known dimensions and reproduces the published bound tables; the fully
minimizing recursion (routing off) can be tighter.  Both are sound upper
bounds.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field, replace

from .algebra import Prime
from .errors import InconsistentFacts
from .pnn import Architecture, ambient_dim, format_architecture, param_bound, parse_architecture

__all__ = [
    "DimensionFact",
    "FactsRegistry",
    "recursive_bound",
    "bound_with_derivation",
    "certify_nonfilling",
    "merge_fact",
    "derive_status",
    "STATUS_CERTIFIED_FILLING",
    "STATUS_CERTIFIED_EXACT",
    "STATUS_CERTIFIED_NONFILLING",
    "STATUS_REPORTED",
    "STATUS_UNKNOWN",
]

STATUS_CERTIFIED_FILLING = "certified_filling"
STATUS_CERTIFIED_EXACT = "certified_exact"
STATUS_CERTIFIED_NONFILLING = "certified_nonfilling"
STATUS_REPORTED = "reported"
STATUS_UNKNOWN = "unknown"

_CERTIFIED = (STATUS_CERTIFIED_FILLING, STATUS_CERTIFIED_EXACT, STATUS_CERTIFIED_NONFILLING)


def derive_status(ambient: int, rank_lower: int, upper_bound: int) -> str:
    """Status label implied by the current evidence (strongest wins)."""
    if rank_lower == ambient:
        return STATUS_CERTIFIED_FILLING
    if rank_lower and rank_lower == upper_bound:
        return STATUS_CERTIFIED_EXACT
    if upper_bound < ambient:
        return STATUS_CERTIFIED_NONFILLING
    if rank_lower:
        return STATUS_REPORTED
    return STATUS_UNKNOWN


@dataclass(frozen=True)
class DimensionFact:
    """Everything known about dim V for one (architecture, r) pair.

    rank_lower is a certified lower bound (0 when unknown); upper_bound is a
    certified upper bound, at worst min(ambient, param_bound).
    """

    widths: tuple[int, ...]
    r: int
    ambient: int
    param_bound: int
    rank_lower: int
    upper_bound: int
    status: str
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not 0 <= self.rank_lower <= self.upper_bound:
            raise InconsistentFacts(
                f"{format_architecture(self.widths)}: lower bound {self.rank_lower} "
                f"exceeds upper bound {self.upper_bound}"
            )
        if self.upper_bound > min(self.ambient, self.param_bound):
            raise InconsistentFacts(
                f"{format_architecture(self.widths)}: upper bound {self.upper_bound} "
                "exceeds the trivial bounds"
            )

    @property
    def key(self) -> tuple[tuple[int, ...], int]:
        return (self.widths, self.r)

    @property
    def certified(self) -> bool:
        return self.status in _CERTIFIED

    @property
    def nonfilling_certified(self) -> bool:
        return self.upper_bound < self.ambient

    @classmethod
    def fresh(cls, arch: Architecture, provenance: dict | None = None) -> "DimensionFact":
        amb, pb = ambient_dim(arch), param_bound(arch)
        upper = min(amb, pb)
        return cls(
            widths=arch.widths,
            r=arch.r,
            ambient=amb,
            param_bound=pb,
            rank_lower=0,
            upper_bound=upper,
            status=derive_status(amb, 0, upper),
            provenance=provenance or {},
        )

    @classmethod
    def exact(cls, arch: Architecture, dimension: int, provenance: dict | None = None) -> "DimensionFact":
        """A fact asserting dim V exactly (e.g. a certified filling dimension)."""
        amb, pb = ambient_dim(arch), param_bound(arch)
        return cls(
            widths=arch.widths,
            r=arch.r,
            ambient=amb,
            param_bound=pb,
            rank_lower=dimension,
            upper_bound=dimension,
            status=derive_status(amb, dimension, dimension),
            provenance=provenance or {},
        )

    @classmethod
    def from_rank(cls, est) -> "DimensionFact":
        """Fact carrying rank evidence from a RankEstimate."""
        arch = est.arch
        amb, pb = ambient_dim(arch), param_bound(arch)
        upper = min(amb, pb)
        prov = {"prime": est.prime.p, "trials": est.trials, "seed": est.seed}
        return cls(
            widths=arch.widths,
            r=arch.r,
            ambient=amb,
            param_bound=pb,
            rank_lower=est.rank_lower,
            upper_bound=upper,
            status=derive_status(amb, est.rank_lower, upper),
            provenance=prov,
        )

    def merged_with(self, other: "DimensionFact") -> "DimensionFact":
        if self.key != other.key:
            raise InconsistentFacts("cannot merge facts for different architectures")
        lower = max(self.rank_lower, other.rank_lower)
        upper = min(self.upper_bound, other.upper_bound)
        if lower > upper:
            raise InconsistentFacts(
                f"{format_architecture(self.widths)}: merged lower {lower} > upper {upper}"
            )
        prov = {**other.provenance, **self.provenance}
        return replace(
            self,
            rank_lower=lower,
            upper_bound=upper,
            status=derive_status(self.ambient, lower, upper),
            provenance=prov,
        )

    def to_json_dict(self) -> dict:
        return {
            "arch": format_architecture(self.widths),
            "r": self.r,
            "ambient": self.ambient,
            "param_bound": self.param_bound,
            "rank_lower": self.rank_lower,
            "upper_bound": self.upper_bound,
            "status": self.status,
            "provenance": self.provenance,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "DimensionFact":
        arch = parse_architecture(data["arch"], int(data["r"]))
        return cls(
            widths=arch.widths,
            r=arch.r,
            ambient=int(data["ambient"]),
            param_bound=int(data["param_bound"]),
            rank_lower=int(data["rank_lower"]),
            upper_bound=int(data["upper_bound"]),
            status=str(data["status"]),
            provenance=dict(data.get("provenance", {})),
        )


class FactsRegistry:
    """Keyed store of dimension facts with max-lower/min-upper merge."""

    def __init__(self, facts=()):
        self._facts: dict[tuple[tuple[int, ...], int], DimensionFact] = {}
        for f in facts:
            self.merge(f)

    def __len__(self):
        return len(self._facts)

    def __iter__(self):
        return iter(sorted(self._facts.values(), key=lambda f: (f.r, f.widths)))

    def get(self, widths, r: int) -> DimensionFact | None:
        return self._facts.get((tuple(widths), r))

    def merge(self, fact: DimensionFact) -> DimensionFact:
        """Upsert; on key collision keep the strongest bounds of both."""
        existing = self._facts.get(fact.key)
        merged = fact if existing is None else existing.merged_with(fact)
        self._facts[fact.key] = merged
        return merged

    def routing_facts(self, r: int) -> list[tuple[tuple[int, ...], int]]:
        """Certified facts long enough (3+ widths) to steer the bound recursion."""
        return [
            (w, f.upper_bound)
            for (w, fr), f in self._facts.items()
            if fr == r and f.certified and len(w) >= 3
        ]

    # -- persistence -------------------------------------------------------

    def to_json(self) -> list[dict]:
        return [f.to_json_dict() for f in self]

    @classmethod
    def from_json(cls, data) -> "FactsRegistry":
        return cls(DimensionFact.from_json_dict(d) for d in data)

    def save(self, path: str) -> None:
        """Atomic write: the facts file is replaced, never partially written."""
        directory = os.path.dirname(os.path.abspath(path))
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".facts.tmp")
        try:
            with os.fdopen(fd, "w") as handle:
                json.dump(self.to_json(), handle, indent=1)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    @classmethod
    def load(cls, path: str) -> "FactsRegistry":
        with open(path) as handle:
            return cls.from_json(json.load(handle))


def merge_fact(registry: FactsRegistry, fact: DimensionFact) -> FactsRegistry:
    """Upsert a fact; raises InconsistentFacts on contradiction."""
    registry.merge(fact)
    return registry


def _contains_proper(widths: tuple[int, ...], sub: tuple[int, ...]) -> bool:
    if len(sub) >= len(widths):
        return False
    k = len(sub)
    return any(widths[i : i + k] == sub for i in range(len(widths) - k + 1))


def _bound_engine(
    widths: tuple[int, ...],
    r: int,
    registry: FactsRegistry | None,
    route: bool,
):
    """Memoized recursion returning {widths: (value, how)}.

    ``how`` is 'base', 'ambient', 'params', 'fact', or ('split', k).
    """
    facts: dict[tuple[int, ...], int] = {}
    routing: list[tuple[int, ...]] = []
    if registry is not None:
        for w, upper in registry.routing_facts(r):
            facts[w] = upper
            routing.append(w)
        # short certified facts still provide values, just no routing force
        for f in registry:
            if f.r == r and f.certified:
                facts.setdefault(f.widths, f.upper_bound)

    memo: dict[tuple[int, ...], tuple[int, object]] = {}

    def bound(w: tuple[int, ...]) -> tuple[int, object]:
        got = memo.get(w)
        if got is not None:
            return got
        if len(w) == 2:
            result = (w[0] * w[1], "base")
            memo[w] = result
            return result
        candidates: list[tuple[int, object]] = []
        if w in facts:
            candidates.append((facts[w], "fact"))
        must_split = route and any(_contains_proper(w, sub) for sub in routing)
        if not must_split:
            arch = Architecture(w, r)
            candidates.append((ambient_dim(arch), "ambient"))
            candidates.append((param_bound(arch), "params"))
        for k in range(1, len(w) - 1):
            left, _ = bound(w[: k + 1])
            right, _ = bound(w[k:])
            candidates.append((left + right - w[k], ("split", k)))
        result = min(candidates, key=lambda c: c[0])
        memo[w] = result
        return result

    bound(widths)
    return memo


def recursive_bound(
    arch: Architecture,
    registry: FactsRegistry | None = None,
    route_through_facts: bool = True,
) -> int:
    """Certified upper bound on dim V for the architecture."""
    memo = _bound_engine(arch.widths, arch.r, registry, route_through_facts)
    return memo[arch.widths][0]


def _render(widths: tuple[int, ...], memo) -> str:
    value, how = memo[widths]
    if how == "base":
        return f"{format_architecture(widths)}={value}"
    if how in ("ambient", "params", "fact"):
        return f"{how}({format_architecture(widths)})={value}"
    _, k = how
    return f"[{_render(widths[: k + 1], memo)} + {_render(widths[k:], memo)} - {widths[k]}]"


def bound_with_derivation(
    arch: Architecture,
    registry: FactsRegistry | None = None,
    route_through_facts: bool = True,
) -> tuple[int, str]:
    """The bound along with a printable account of the winning derivation."""
    memo = _bound_engine(arch.widths, arch.r, registry, route_through_facts)
    return memo[arch.widths][0], _render(arch.widths, memo)


def certify_nonfilling(arch: Architecture, registry: FactsRegistry | None = None) -> DimensionFact:
    """Resolve the filling question from bounds alone.

    Returns a certified_nonfilling fact when the recursive bound stays below
    the ambient dimension; otherwise falls back to whatever rank evidence
    the registry holds (reported) or unknown.
    """
    amb, pb = ambient_dim(arch), param_bound(arch)
    value, derivation = bound_with_derivation(arch, registry)
    upper = min(amb, pb, value)
    existing = registry.get(arch.widths, arch.r) if registry is not None else None
    rank_lower = existing.rank_lower if existing is not None else 0
    if existing is not None:
        upper = min(upper, existing.upper_bound)
    return DimensionFact(
        widths=arch.widths,
        r=arch.r,
        ambient=amb,
        param_bound=pb,
        rank_lower=rank_lower,
        upper_bound=upper,
        status=derive_status(amb, rank_lower, upper),
        provenance={"method": "recursive_bound", "derivation": derivation},
    )
