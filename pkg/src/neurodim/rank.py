"""Jacobian ranks over F_p: certified lower bounds for neurovariety dimension.

The generic Jacobian rank over F_p is at most the rank over the rationals,
which equals the neurovariety dimension at generic parameters.  Hitting the
ambient dimension therefore *certifies* filling; any smaller value is a
reported dimension only.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _engine, _kernel as K
from .algebra import DEFAULT_PRIME, Prime
from .errors import SmallPrimeWarning
from .pnn import Architecture, WeightAssignment, ambient_dim, forward, param_bound

__all__ = [
    "RankEstimate",
    "jacobian_at",
    "jacobian_by_dual_seeds",
    "matrix_rank",
    "generic_rank",
]


@dataclass(frozen=True)
class RankEstimate:
    """Outcome of randomized rank estimation for one architecture."""

    arch: Architecture
    prime: Prime
    trials: int
    seed: int
    rank_lower: int
    certified_filling: bool

    @property
    def status(self) -> str:
        return "certified_filling" if self.certified_filling else "reported"


def jacobian_at(arch: Architecture, weights: WeightAssignment, ambient_cap: int | None = None) -> np.ndarray:
    """Jacobian of the parameter map at the given weights.

    Column k holds the infinitesimal part of the forward pass with parameter
    k replaced by w_k + eps: rows follow the channel-major coefficient
    flattening, columns are layer-ascending and row-major within a layer.
    """
    weights.validate(arch)
    plan = _engine.plan_for(arch.widths, arch.r, ambient_cap)
    return _engine.jacobian_matrix(plan, weights.matrices, weights.prime.p)


def jacobian_by_dual_seeds(arch: Architecture, weights: WeightAssignment) -> np.ndarray:
    """Definitional Jacobian: one dual-number forward pass per parameter.

    Slow reference used to validate the batched engine.
    """
    weights.validate(arch)
    cols = []
    for layer, m in enumerate(weights.matrices):
        for i in range(m.shape[0]):
            for j in range(m.shape[1]):
                seeded = weights.with_dual_seed(layer, i, j)
                cols.append(forward(arch, seeded).flatten_eps())
    return np.column_stack(cols)


def matrix_rank(mat: np.ndarray, prime: Prime) -> int:
    """Row-echelon rank of an integer matrix over F_p."""
    K.check_modulus(prime.p)
    work = np.array(mat, dtype=np.int64) % prime.p
    if work.size == 0:
        return 0
    return int(K.rank_mod(work, prime.p))


def generic_rank(
    arch: Architecture,
    prime: Prime = DEFAULT_PRIME,
    trials: int = 3,
    seed: int = 0,
    ambient_cap: int | None = None,
) -> RankEstimate:
    """Max Jacobian rank over independently sampled weights.

    Deterministic for fixed (seed, prime, trials): trial t draws its weights
    from the split seed (seed, t), so results do not depend on evaluation
    order.  Stops early once the ambient dimension is reached.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if prime.p <= arch.r:
        raise ValueError(f"prime {prime.p} must exceed the activation exponent {arch.r}")
    K.check_modulus(prime.p)
    if prime.p <= arch.out_degree:
        warnings.warn(
            f"prime {prime.p} is at most the output degree {arch.out_degree}; "
            "observed ranks may undershoot the characteristic-zero rank",
            SmallPrimeWarning,
            stacklevel=2,
        )
    plan = _engine.plan_for(arch.widths, arch.r, ambient_cap)
    ambient = plan.ambient
    best = 0
    for t in range(trials):
        mats = _engine.sample_weights(arch, prime, seed, t)
        jac = _engine.jacobian_matrix(plan, mats, prime.p)
        best = max(best, int(K.rank_mod(jac, prime.p)))
        if best == ambient:
            break
    limit = min(ambient, param_bound(arch))
    assert best <= limit, f"rank {best} exceeds bound {limit} for {arch}: kernel bug"
    return RankEstimate(
        arch=arch,
        prime=prime,
        trials=trials,
        seed=seed,
        rank_lower=best,
        certified_filling=best == ambient,
    )
