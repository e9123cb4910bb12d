"""Field, dual-number, monomial-basis, and polynomial arithmetic tests."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neurodim import (
    BasisMismatch,
    DualElement,
    FieldElement,
    HomPoly,
    Prime,
    field_inv,
    is_prime,
    monomial_basis,
    poly_linear_combination,
    poly_mul,
    poly_pow,
)

SMALL = Prime(101)
BIG = Prime(2**31 - 1)


def test_is_prime_basics():
    assert is_prime(2) and is_prime(3) and is_prime(101) and is_prime(2**31 - 1)
    assert not is_prime(1) and not is_prime(0) and not is_prime(-7)
    assert not is_prime(2**31 - 2) and not is_prime(561)  # Carmichael


def test_prime_rejects_composite():
    with pytest.raises(ValueError):
        Prime(100)


def test_field_inv_examples():
    assert field_inv(FieldElement(3, Prime(7))).value == 5
    assert field_inv(FieldElement(1, BIG)).value == 1
    # frozen via the extended-Euclid oracle pow(2, -1, p)
    got = field_inv(FieldElement(2, BIG))
    assert got.value == 1073741824
    assert (2 * got.value) % BIG.p == 1


def test_field_inv_zero_raises():
    with pytest.raises(ZeroDivisionError):
        field_inv(FieldElement(0, SMALL))


@pytest.mark.parametrize("prime", [SMALL, BIG])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_field_axioms(prime, data):
    draw = lambda: FieldElement(data.draw(st.integers(0, prime.p - 1)), prime)
    a, b, c = draw(), draw(), draw()
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + 0 == a and a * 1 == a
    assert a + (-a) == 0
    if a.value:
        assert a * a.inverse() == 1


@settings(max_examples=80, deadline=None)
@given(
    a=st.integers(0, BIG.p - 1),
    b=st.integers(0, BIG.p - 1),
    r=st.integers(1, 16),
)
def test_dual_power_rule(a, b, r):
    # infinitesimal part of (a + b*eps)**r is r * a**(r-1) * b
    d = DualElement(FieldElement(a, BIG), FieldElement(b, BIG))
    got = d**r
    assert got.real.value == pow(a, r, BIG.p)
    assert got.infinitesimal.value == r * pow(a, r - 1, BIG.p) * b % BIG.p


def test_dual_product_rule():
    p = SMALL
    x = DualElement(p.element(3), p.element(5))
    y = DualElement(p.element(7), p.element(2))
    z = x * y
    assert z.real.value == 21
    assert z.infinitesimal.value == (3 * 2 + 5 * 7) % p.p


# ---------------------------------------------------------------------------
# Monomial bases
# ---------------------------------------------------------------------------


def test_basis_two_vars_order():
    b = monomial_basis(2, 2)
    assert b.exponents == ((2, 0), (1, 1), (0, 2))


def test_basis_three_vars_order():
    b = monomial_basis(3, 2)
    assert b.exponents == ((2, 0, 0), (1, 1, 0), (0, 2, 0), (1, 0, 1), (0, 1, 1), (0, 0, 2))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("degree", list(range(0, 17)))
def test_basis_roundtrip(n, degree):
    b = monomial_basis(n, degree)
    assert len(b) == math.comb(n + degree - 1, degree)
    for i, e in enumerate(b.exponents):
        assert sum(e) == degree
        assert b.index_of(e) == i
        assert b.exponent(i) == e


def test_basis_order_is_grevlex():
    # descending grevlex: the later monomial has the negative trailing
    # difference coordinate
    for n in (2, 3, 4):
        b = monomial_basis(n, 3)
        for i in range(len(b) - 1):
            diff = [x - y for x, y in zip(b.exponents[i], b.exponents[i + 1])]
            last = next(d for d in reversed(diff) if d != 0)
            assert last < 0


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


def x(j, n=2, prime=SMALL, dual=False):
    return HomPoly.variable(j, n, prime, dual=dual)


def test_linear_combination_examples():
    s = poly_linear_combination([x(0), x(1)], [1, 1])
    assert list(s.coeffs) == [1, 1]
    s = poly_linear_combination([x(0), x(1)], [1, 2])
    assert list(s.coeffs) == [1, 2]
    q = poly_mul(x(0), x(1))
    z = poly_linear_combination([q, q], [1, -1])
    assert z.is_zero()


def test_linear_combination_basis_mismatch():
    with pytest.raises(BasisMismatch):
        poly_linear_combination([x(0), poly_mul(x(0), x(0))], [1, 1])


def test_poly_mul_examples():
    s = poly_linear_combination([x(0), x(1)], [1, 1])
    sq = poly_mul(s, s)
    assert list(sq.coeffs) == [1, 2, 1]
    t = poly_linear_combination([x(0), x(1)], [1, 2])
    assert list(poly_mul(t, t).coeffs) == [1, 4, 4]
    one = HomPoly.constant(1, 2, SMALL)
    assert poly_mul(one, sq) == sq


def test_poly_mul_num_vars_mismatch():
    with pytest.raises(BasisMismatch):
        poly_mul(x(0, n=2), x(0, n=3))


def test_poly_pow_examples():
    s = poly_linear_combination([x(0), x(1)], [1, 1])
    assert poly_pow(s, 2) == poly_mul(s, s)
    assert list(poly_pow(x(0), 5).coeffs) == [1, 0, 0, 0, 0, 0]
    with pytest.raises(ValueError):
        poly_pow(s, 0)


def _random_poly(rng, n, degree, prime):
    basis = monomial_basis(n, degree)
    return HomPoly(basis, prime, rng.integers(0, prime.p, size=len(basis)))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_poly_ring_laws(n):
    rng = np.random.default_rng(7 + n)
    for _ in range(10):
        a = _random_poly(rng, n, int(rng.integers(0, 4)), SMALL)
        b = _random_poly(rng, n, int(rng.integers(0, 4)), SMALL)
        c = _random_poly(rng, n, int(rng.integers(0, 4)), SMALL)
        assert poly_mul(a, b) == poly_mul(b, a)
        assert poly_mul(poly_mul(a, b), c) == poly_mul(a, poly_mul(b, c))
        assert a.degree + b.degree == poly_mul(a, b).degree


@pytest.mark.parametrize("n", [2, 3])
def test_poly_pow_additivity(n):
    rng = np.random.default_rng(40 + n)
    for _ in range(6):
        a = _random_poly(rng, n, int(rng.integers(1, 3)), SMALL)
        r1, r2 = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        assert poly_pow(a, r1 + r2) == poly_mul(poly_pow(a, r1), poly_pow(a, r2))


def test_dual_poly_mul_leibniz():
    # eps part of (u + u' e)(v + v' e) must be u v' + u' v
    rng = np.random.default_rng(3)
    basis = monomial_basis(2, 2)
    p = SMALL

    def dual_poly():
        return HomPoly(
            basis, p, rng.integers(0, p.p, size=len(basis)), eps=rng.integers(0, p.p, size=len(basis))
        )

    u, v = dual_poly(), dual_poly()
    got = poly_mul(u, v)
    u_re = HomPoly(basis, p, u.coeffs)
    u_eps = HomPoly(basis, p, u.eps)
    v_re = HomPoly(basis, p, v.coeffs)
    v_eps = HomPoly(basis, p, v.eps)
    want = poly_linear_combination([poly_mul(u_re, v_eps), poly_mul(u_eps, v_re)], [1, 1])
    assert np.array_equal(got.eps, want.coeffs)
    assert np.array_equal(got.coeffs, poly_mul(u_re, v_re).coeffs)


def test_degree_zero_unit_law():
    one = HomPoly.constant(1, 3, SMALL)
    q = _random_poly(np.random.default_rng(5), 3, 2, SMALL)
    assert poly_mul(one, q) == q
    assert poly_mul(q, one) == q


def test_coefficient_accessor():
    s = poly_linear_combination([x(0), x(1)], [3, 4])
    c = s.coefficient(1)
    assert isinstance(c, FieldElement) and c.value == 4
    d = poly_linear_combination([x(0, dual=True), x(1, dual=True)], [3, 4])
    cd = d.coefficient(0)
    assert isinstance(cd, DualElement) and cd.real.value == 3
