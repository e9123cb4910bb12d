"""Architectures, the parameter map, and combinatorial dimension formulas.

An architecture is a width sequence (d_0, ..., d_L) with a power-activation
exponent r; the network composes linear maps with the entrywise r-th power,
so each output channel is a homogeneous polynomial of degree r**(L-1) in the
d_0 input variables.  The parameter map sends weight matrices to the
coefficient vectors of those polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import (
    DualElement,
    FieldElement,
    HomPoly,
    Prime,
    monomial_basis,
    poly_linear_combination,
    poly_pow,
)
from .errors import DegreeOverflow, ShapeError

__all__ = [
    "Architecture",
    "WeightAssignment",
    "CoefficientVector",
    "parse_architecture",
    "format_architecture",
    "ambient_dim",
    "param_count",
    "param_bound",
    "expected_dim",
    "is_unimodal",
    "forward",
    "DEFAULT_AMBIENT_CAP",
]

#: Architectures whose ambient dimension exceeds this are rejected before any
#: evaluation is attempted.
DEFAULT_AMBIENT_CAP = 1_000_000

# Degrees beyond this cannot be handled by the int64 index arithmetic.
_MAX_DEGREE = 2**62


@dataclass(frozen=True)
class Architecture:
    """Width sequence (d_0, ..., d_L) with activation exponent r."""

    widths: tuple[int, ...]
    r: int

    def __post_init__(self):
        widths = tuple(int(w) for w in self.widths)
        object.__setattr__(self, "widths", widths)
        if len(widths) < 2:
            raise ValueError("an architecture needs at least one weight layer")
        if any(w < 1 for w in widths):
            raise ValueError("all widths must be positive")
        if self.r < 1:
            raise ValueError("activation exponent must be a positive integer")

    @property
    def depth(self) -> int:
        return len(self.widths) - 1

    @property
    def num_vars(self) -> int:
        return self.widths[0]

    @property
    def out_channels(self) -> int:
        return self.widths[-1]

    @property
    def out_degree(self) -> int:
        """r**(L-1), guarded against runaway exponents."""
        d = self.r ** (self.depth - 1)
        if d > _MAX_DEGREE:
            raise DegreeOverflow(f"output degree {self.r}**{self.depth - 1} is too large")
        return d

    def hidden(self) -> tuple[int, ...]:
        return self.widths[1:-1]

    def decrement(self, i: int) -> "Architecture":
        """The subarchitecture with hidden width d_i lowered by one (1 <= i <= L-1)."""
        if not 1 <= i <= self.depth - 1:
            raise ValueError(f"hidden index {i} out of range")
        if self.widths[i] <= 1:
            raise ValueError(f"hidden width d_{i} is already 1")
        w = list(self.widths)
        w[i] -= 1
        return Architecture(tuple(w), self.r)

    def __str__(self):
        return format_architecture(self.widths)


def parse_architecture(text: str, r: int) -> Architecture:
    """Parse a hyphen-separated width string such as '2-3-4-5-4-6-4-1'."""
    try:
        widths = tuple(int(part) for part in text.strip().split("-"))
    except ValueError as exc:
        raise ValueError(f"bad architecture string {text!r}") from exc
    return Architecture(widths, r)


def format_architecture(widths: Sequence[int]) -> str:
    return "-".join(str(w) for w in widths)


def ambient_dim(arch: Architecture) -> int:
    """d_L * binom(d_0 + r**(L-1) - 1, r**(L-1)): the coefficient-space dimension."""
    deg = arch.out_degree
    return arch.out_channels * math.comb(arch.num_vars + deg - 1, deg)


def param_count(arch: Architecture) -> int:
    """Total number of weight entries, sum of d_i * d_{i-1}."""
    w = arch.widths
    return sum(w[i] * w[i - 1] for i in range(1, len(w)))


def param_bound(arch: Architecture) -> int:
    """Parameter count minus the hidden widths: a dimension upper bound that
    accounts for the per-hidden-channel rescaling symmetry."""
    return param_count(arch) - sum(arch.hidden())


def expected_dim(arch: Architecture) -> int:
    """min(ambient dimension, parameter bound)."""
    return min(ambient_dim(arch), param_bound(arch))


def is_unimodal(widths) -> bool:
    """True iff the width sequence rises (weakly) then falls (weakly).

    Accepts an Architecture or any nonempty width sequence, including
    degenerate length-1 sequences.
    """
    if isinstance(widths, Architecture):
        seq = widths.widths
    else:
        seq = tuple(widths)
    if not seq:
        raise ValueError("empty width sequence")
    i = 0
    while i + 1 < len(seq) and seq[i] <= seq[i + 1]:
        i += 1
    while i + 1 < len(seq) and seq[i] >= seq[i + 1]:
        i += 1
    return i == len(seq) - 1


# ---------------------------------------------------------------------------
# Weights and forward evaluation
# ---------------------------------------------------------------------------


class WeightAssignment:
    """Weight matrices W_1, ..., W_L over F_p, optionally with dual parts.

    ``matrices[k]`` has shape (d_{k+1}, d_k) as int64 residues.  ``eps``
    carries the infinitesimal parts during forward-mode differentiation.
    """

    __slots__ = ("matrices", "prime", "eps")

    def __init__(self, matrices: Sequence[np.ndarray], prime: Prime, eps=None):
        self.matrices = [np.asarray(m, dtype=np.int64) % prime.p for m in matrices]
        self.prime = prime
        self.eps = None
        if eps is not None:
            self.eps = [np.asarray(m, dtype=np.int64) % prime.p for m in eps]
            if len(self.eps) != len(self.matrices) or any(
                a.shape != b.shape for a, b in zip(self.matrices, self.eps)
            ):
                raise ShapeError("dual parts do not match the weight shapes")

    @property
    def dual(self) -> bool:
        return self.eps is not None

    def validate(self, arch: Architecture) -> None:
        w = arch.widths
        if len(self.matrices) != arch.depth:
            raise ShapeError(f"expected {arch.depth} matrices, got {len(self.matrices)}")
        for k, m in enumerate(self.matrices):
            want = (w[k + 1], w[k])
            if m.shape != want:
                raise ShapeError(f"W_{k + 1} has shape {m.shape}, expected {want}")

    @classmethod
    def random(cls, arch: Architecture, prime: Prime, rng: np.random.Generator) -> "WeightAssignment":
        """Uniform entries in [0, p); all-zero matrices are resampled."""
        mats = []
        for k in range(1, len(arch.widths)):
            shape = (arch.widths[k], arch.widths[k - 1])
            m = rng.integers(0, prime.p, size=shape, dtype=np.int64)
            while not m.any():
                m = rng.integers(0, prime.p, size=shape, dtype=np.int64)
            mats.append(m)
        return cls(mats, prime)

    def with_dual_seed(self, layer: int, i: int, j: int) -> "WeightAssignment":
        """Copy with an eps seed on entry (i, j) of W_{layer+1}."""
        eps = [np.zeros_like(m) for m in self.matrices]
        eps[layer][i, j] = 1
        return WeightAssignment(self.matrices, self.prime, eps=eps)


@dataclass(frozen=True)
class CoefficientVector:
    """Per-channel output polynomials of the parameter map.

    Flattening is channel-major: channel j's coefficients in basis order,
    concatenated over j.  This fixes the Jacobian row order.
    """

    channels: tuple[HomPoly, ...]

    def flatten(self) -> np.ndarray:
        return np.concatenate([c.coeffs for c in self.channels])

    def flatten_eps(self) -> np.ndarray:
        if self.channels[0].eps is None:
            raise ValueError("not a dual coefficient vector")
        return np.concatenate([c.eps for c in self.channels])

    def __len__(self):
        return sum(len(c.basis) for c in self.channels)


def _check_cap(arch: Architecture, ambient_cap: int | None) -> None:
    cap = DEFAULT_AMBIENT_CAP if ambient_cap is None else ambient_cap
    a = ambient_dim(arch)
    if a > cap:
        raise DegreeOverflow(f"ambient dimension {a} exceeds cap {cap}")


def forward(
    arch: Architecture,
    weights: WeightAssignment,
    ambient_cap: int | None = None,
) -> CoefficientVector:
    """Evaluate the parameter map: alternate matrix application and the
    entrywise r-th power, with no activation after the last layer."""
    weights.validate(arch)
    _check_cap(arch, ambient_cap)
    prime = weights.prime
    n = arch.num_vars
    dual = weights.dual

    def rows(layer: int):
        m = weights.matrices[layer]
        if not dual:
            return [[int(v) for v in row] for row in m]
        e = weights.eps[layer]
        out = []
        for i in range(m.shape[0]):
            out.append(
                [
                    DualElement(prime.element(int(m[i, j])), prime.element(int(e[i, j])))
                    for j in range(m.shape[1])
                ]
            )
        return out

    current = [HomPoly.variable(j, n, prime, dual=dual) for j in range(n)]
    for layer in range(arch.depth):
        if layer > 0:
            current = [poly_pow(q, arch.r) for q in current]
        current = [poly_linear_combination(current, row) for row in rows(layer)]
    return CoefficientVector(tuple(current))
