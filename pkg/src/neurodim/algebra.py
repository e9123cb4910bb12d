"""Exact arithmetic: prime fields, dual numbers, and dense homogeneous polynomials.

Scalars are residues mod a prime p.  Dual numbers a + b*eps with eps**2 = 0
carry first derivatives through sums, products and powers.  A homogeneous
polynomial is a dense coefficient vector over the graded reverse-
lexicographic monomial basis of its degree, so multiplication is a
convolution over exponent vectors.  All values are immutable after
construction and safe to share between workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import _kernel as K
from .errors import BasisMismatch

__all__ = [
    "Prime",
    "FieldElement",
    "DualElement",
    "MonomialBasis",
    "HomPoly",
    "DEFAULT_PRIME",
    "is_prime",
    "field_inv",
    "poly_linear_combination",
    "poly_mul",
    "poly_pow",
    "monomial_basis",
]

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for every n < 3.3e24."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Prime:
    """A verified prime modulus."""

    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def element(self, value: int) -> FieldElement:
        return FieldElement(value % self.p, self)

    def inv(self, value: int) -> int:
        value %= self.p
        if value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return pow(value, self.p - 2, self.p)

    def __repr__(self):
        return f"Prime({self.p})"


#: The Mersenne prime 2**31 - 1, the default modulus for rank computations.
DEFAULT_PRIME = Prime(2**31 - 1)


class FieldElement:
    """A residue in F_p with field arithmetic."""

    __slots__ = ("value", "prime")

    def __init__(self, value: int, prime: Prime):
        object.__setattr__(self, "value", value % prime.p)
        object.__setattr__(self, "prime", prime)

    def __setattr__(self, name, val):
        raise AttributeError("FieldElement is immutable")

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.prime.p != self.prime.p:
                raise ValueError("mixed moduli")
            return other
        if isinstance(other, int):
            return FieldElement(other, self.prime)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value + o.value, self.prime)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(-self.value, self.prime)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value - o.value, self.prime)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value * o.value, self.prime)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        return FieldElement(self.prime.inv(self.value), self.prime)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(pow(self.value, e, self.prime.p), self.prime)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.value == other.value and self.prime.p == other.prime.p
        if isinstance(other, int):
            return self.value == other % self.prime.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.prime.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"F{self.prime.p}({self.value})"


def field_inv(a: FieldElement) -> FieldElement:
    """Multiplicative inverse in F_p; raises ZeroDivisionError on 0."""
    return a.inverse()


class DualElement:
    """Dual number a + b*eps over F_p, with eps**2 = 0.

    The infinitesimal part of a product follows the Leibniz rule, so
    evaluating a polynomial map on (w + eps) yields its value and its
    derivative in w simultaneously.
    """

    __slots__ = ("real", "infinitesimal")

    def __init__(self, real: FieldElement, infinitesimal: FieldElement):
        if real.prime.p != infinitesimal.prime.p:
            raise ValueError("mixed moduli")
        object.__setattr__(self, "real", real)
        object.__setattr__(self, "infinitesimal", infinitesimal)

    def __setattr__(self, name, val):
        raise AttributeError("DualElement is immutable")

    @classmethod
    def constant(cls, value: int, prime: Prime) -> "DualElement":
        return cls(prime.element(value), prime.element(0))

    @classmethod
    def seed(cls, value: int, prime: Prime) -> "DualElement":
        """value + eps: the differentiation seed for one parameter."""
        return cls(prime.element(value), prime.element(1))

    def _coerce(self, other) -> "DualElement":
        if isinstance(other, DualElement):
            return other
        if isinstance(other, FieldElement):
            return DualElement(other, FieldElement(0, other.prime))
        if isinstance(other, int):
            return DualElement.constant(other, self.real.prime)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return DualElement(self.real + o.real, self.infinitesimal + o.infinitesimal)

    __radd__ = __add__

    def __neg__(self):
        return DualElement(-self.real, -self.infinitesimal)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return DualElement(
            self.real * o.real,
            self.real * o.infinitesimal + self.infinitesimal * o.real,
        )

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers of dual numbers are not supported")
        result = DualElement.constant(1, self.real.prime)
        base = self
        while e > 0:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, DualElement):
            return self.real == other.real and self.infinitesimal == other.infinitesimal
        return NotImplemented

    def __hash__(self):
        return hash((self.real, self.infinitesimal))

    def __repr__(self):
        return f"({self.real.value} + {self.infinitesimal.value}e mod {self.real.prime.p})"


# ---------------------------------------------------------------------------
# Monomial bases
# ---------------------------------------------------------------------------


def _grevlex_exponents(num_vars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """All exponent vectors of total degree `degree`, grevlex-descending.

    Descending grevlex coincides with ascending lexicographic order of the
    reversed exponent tuples, e.g. for two variables: x1^D, x1^(D-1)*x2, ...
    """
    bucket: list[tuple[int, ...]] = []

    def rec(prefix: list[int], remaining: int, slots: int):
        if slots == 1:
            bucket.append(tuple(prefix + [remaining]))
            return
        for e in range(remaining + 1):
            rec(prefix + [e], remaining - e, slots - 1)

    rec([], degree, num_vars)
    bucket.sort(key=lambda e: e[::-1])
    return tuple(bucket)


class MonomialBasis:
    """Ordered monomial basis for homogeneous polynomials of one degree.

    The order is graded reverse-lexicographic (descending), total and
    deterministic, so coefficient-vector layouts are stable across runs.
    """

    __slots__ = ("num_vars", "degree", "exponents", "_index")

    def __init__(self, num_vars: int, degree: int):
        if num_vars < 1:
            raise ValueError("need at least one variable")
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        self.num_vars = num_vars
        self.degree = degree
        self.exponents = _grevlex_exponents(num_vars, degree)
        self._index = {e: i for i, e in enumerate(self.exponents)}
        assert len(self.exponents) == math.comb(num_vars + degree - 1, degree)

    def __len__(self):
        return len(self.exponents)

    def index_of(self, exponent: Sequence[int]) -> int:
        return self._index[tuple(exponent)]

    def exponent(self, index: int) -> tuple[int, ...]:
        return self.exponents[index]

    def __eq__(self, other):
        return (
            isinstance(other, MonomialBasis)
            and self.num_vars == other.num_vars
            and self.degree == other.degree
        )

    def __hash__(self):
        return hash((self.num_vars, self.degree))

    def __repr__(self):
        return f"MonomialBasis(n={self.num_vars}, D={self.degree}, len={len(self)})"


@lru_cache(maxsize=None)
def monomial_basis(num_vars: int, degree: int) -> MonomialBasis:
    return MonomialBasis(num_vars, degree)


@lru_cache(maxsize=None)
def mul_table(num_vars: int, deg_a: int, deg_b: int) -> np.ndarray:
    """Index table for products: tbl[i, j] = index of monomial_a[i]*monomial_b[j].

    Only needed for three or more variables; with two variables the product
    index is simply i + j and the dense convolution kernels apply directly.
    """
    ba = monomial_basis(num_vars, deg_a)
    bb = monomial_basis(num_vars, deg_b)
    bc = monomial_basis(num_vars, deg_a + deg_b)
    tbl = np.empty((len(ba), len(bb)), dtype=np.int64)
    for i, ea in enumerate(ba.exponents):
        for j, eb in enumerate(bb.exponents):
            tbl[i, j] = bc.index_of(tuple(x + y for x, y in zip(ea, eb)))
    return tbl


# ---------------------------------------------------------------------------
# Homogeneous polynomials
# ---------------------------------------------------------------------------


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class HomPoly:
    """Dense homogeneous polynomial over F_p, or over the dual numbers.

    Coefficients are stored as an int64 vector in basis order; a dual
    polynomial carries a second vector with the infinitesimal parts.
    Instances are immutable.
    """

    __slots__ = ("basis", "prime", "coeffs", "eps")

    def __init__(self, basis: MonomialBasis, prime: Prime, coeffs, eps=None):
        K.check_modulus(prime.p)
        c = np.asarray(coeffs, dtype=np.int64) % prime.p
        if c.shape != (len(basis),):
            raise BasisMismatch(
                f"expected {len(basis)} coefficients for {basis}, got shape {c.shape}"
            )
        self.basis = basis
        self.prime = prime
        self.coeffs = _freeze(c)
        if eps is not None:
            e = np.asarray(eps, dtype=np.int64) % prime.p
            if e.shape != c.shape:
                raise BasisMismatch("infinitesimal part has wrong length")
            self.eps = _freeze(e)
        else:
            self.eps = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, num_vars: int, degree: int, prime: Prime, dual: bool = False) -> "HomPoly":
        basis = monomial_basis(num_vars, degree)
        z = np.zeros(len(basis), dtype=np.int64)
        return cls(basis, prime, z, eps=z.copy() if dual else None)

    @classmethod
    def variable(cls, j: int, num_vars: int, prime: Prime, dual: bool = False) -> "HomPoly":
        """The degree-1 monomial x_{j+1}."""
        basis = monomial_basis(num_vars, 1)
        c = np.zeros(num_vars, dtype=np.int64)
        c[basis.index_of(tuple(1 if k == j else 0 for k in range(num_vars)))] = 1
        return cls(basis, prime, c, eps=np.zeros(num_vars, dtype=np.int64) if dual else None)

    @classmethod
    def constant(cls, value: int, num_vars: int, prime: Prime, dual: bool = False) -> "HomPoly":
        basis = monomial_basis(num_vars, 0)
        c = np.array([value % prime.p], dtype=np.int64)
        return cls(basis, prime, c, eps=np.zeros(1, dtype=np.int64) if dual else None)

    # -- structure ---------------------------------------------------------

    @property
    def dual(self) -> bool:
        return self.eps is not None

    @property
    def num_vars(self) -> int:
        return self.basis.num_vars

    @property
    def degree(self) -> int:
        return self.basis.degree

    def coefficient(self, index: int):
        """Scalar coefficient at a basis index (FieldElement or DualElement)."""
        re = self.prime.element(int(self.coeffs[index]))
        if self.eps is None:
            return re
        return DualElement(re, self.prime.element(int(self.eps[index])))

    def is_zero(self) -> bool:
        if np.any(self.coeffs):
            return False
        return self.eps is None or not np.any(self.eps)

    def __eq__(self, other):
        if not isinstance(other, HomPoly):
            return NotImplemented
        if self.basis != other.basis or self.prime.p != other.prime.p:
            return False
        if self.dual != other.dual:
            return False
        if not np.array_equal(self.coeffs, other.coeffs):
            return False
        return self.eps is None or np.array_equal(self.eps, other.eps)

    def __hash__(self):
        return hash((self.basis, self.prime.p, self.coeffs.tobytes()))

    def __repr__(self):
        kind = "dual " if self.dual else ""
        return f"HomPoly({kind}n={self.num_vars}, D={self.degree}, mod {self.prime.p})"

    # -- arithmetic ----------------------------------------------------------

    def _check_compatible(self, other: "HomPoly", same_degree: bool):
        if self.num_vars != other.num_vars:
            raise BasisMismatch("different numbers of variables")
        if self.prime.p != other.prime.p:
            raise BasisMismatch("different moduli")
        if same_degree and self.basis != other.basis:
            raise BasisMismatch("different monomial bases")

    def __add__(self, other: "HomPoly") -> "HomPoly":
        return poly_linear_combination([self, other], [1, 1])

    def __sub__(self, other: "HomPoly") -> "HomPoly":
        return poly_linear_combination([self, other], [1, -1])

    def __mul__(self, other):
        if isinstance(other, HomPoly):
            return poly_mul(self, other)
        if isinstance(other, (int, FieldElement, DualElement)):
            return poly_linear_combination([self], [other])
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, r: int) -> "HomPoly":
        return poly_pow(self, r)


def _as_scalar_pair(w, prime: Prime) -> tuple[int, int]:
    """Weight as (real, infinitesimal) residues."""
    if isinstance(w, DualElement):
        return w.real.value, w.infinitesimal.value
    if isinstance(w, FieldElement):
        return w.value, 0
    return int(w) % prime.p, 0


def poly_linear_combination(polys: Sequence[HomPoly], weights: Sequence) -> HomPoly:
    """Coefficientwise sum(w_i * poly_i); all polys must share one basis."""
    if not polys:
        raise ValueError("empty linear combination")
    if len(polys) != len(weights):
        raise BasisMismatch("polys and weights have different lengths")
    head = polys[0]
    for q in polys[1:]:
        head._check_compatible(q, same_degree=True)
    p = head.prime.p
    pairs = [_as_scalar_pair(w, head.prime) for w in weights]
    dual = head.dual or any(e for _, e in pairs)
    for q in polys:
        if q.dual != head.dual:
            raise BasisMismatch("mixed dual and plain polynomials")
    out = np.zeros(len(head.basis), dtype=np.int64)
    out_eps = np.zeros(len(head.basis), dtype=np.int64) if dual else None
    for q, (wr, we) in zip(polys, pairs):
        K.axpy_acc(out, wr, q.coeffs, p)
        if dual:
            if q.eps is not None:
                K.axpy_acc(out_eps, wr, q.eps, p)
            if we:
                K.axpy_acc(out_eps, we, q.coeffs, p)
    return HomPoly(head.basis, head.prime, out, eps=out_eps)


def _conv(out, a, b, num_vars, deg_a, deg_b, p):
    if num_vars == 2:
        K.conv_acc(out, a, b, p)
    else:
        K.conv_table_acc(out, a, b, mul_table(num_vars, deg_a, deg_b), p)


def poly_mul(a: HomPoly, b: HomPoly) -> HomPoly:
    """Product polynomial; degree adds exactly."""
    a._check_compatible(b, same_degree=False)
    n, p = a.num_vars, a.prime.p
    basis = monomial_basis(n, a.degree + b.degree)
    out = np.zeros(len(basis), dtype=np.int64)
    _conv(out, a.coeffs, b.coeffs, n, a.degree, b.degree, p)
    if not (a.dual or b.dual):
        return HomPoly(basis, a.prime, out)
    # (u + u_eps e)(v + v_eps e) = uv + (u v_eps + u_eps v) e
    out_eps = np.zeros(len(basis), dtype=np.int64)
    if b.eps is not None:
        _conv(out_eps, a.coeffs, b.eps, n, a.degree, b.degree, p)
    if a.eps is not None:
        _conv(out_eps, a.eps, b.coeffs, n, a.degree, b.degree, p)
    return HomPoly(basis, a.prime, out, eps=out_eps)


def poly_pow(a: HomPoly, r: int) -> HomPoly:
    """a**r by square-and-multiply; the activation exponent must be >= 1."""
    if r < 1:
        raise ValueError("exponent must be a positive integer")
    result = None
    base = a
    e = r
    while e > 0:
        if e & 1:
            result = base if result is None else poly_mul(result, base)
        e >>= 1
        if e:
            base = poly_mul(base, base)
    return result
