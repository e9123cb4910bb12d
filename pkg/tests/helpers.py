"""Shared test utilities: independent oracles and random-architecture samplers.

The oracles here deliberately avoid the library's evaluation paths: the
Jacobian oracle differentiates symbolically over the rationals and reduces
mod p afterwards, and the rank oracle enumerates minors.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
import sympy as sp

from neurodim import Architecture, monomial_basis


def oracle_jacobian(arch: Architecture, matrices, p: int) -> np.ndarray:
    """Symbolic-differentiation Jacobian, reduced mod p.

    Column order matches the library contract: layers ascending, row-major
    within each weight matrix; rows are channel-major coefficients in
    grevlex order.
    """
    n = arch.num_vars
    xs = sp.symbols(f"x0:{n}") if n > 1 else (sp.Symbol("x0"),)
    wsyms = []
    for layer, m in enumerate(matrices):
        wsyms.append(
            [
                [sp.Symbol(f"w{layer}_{i}_{j}") for j in range(m.shape[1])]
                for i in range(m.shape[0])
            ]
        )

    cur = list(xs)
    for layer, m in enumerate(matrices):
        if layer > 0:
            cur = [sp.expand(c**arch.r) for c in cur]
        cur = [
            sp.expand(sum(wsyms[layer][i][j] * cur[j] for j in range(m.shape[1])))
            for i in range(m.shape[0])
        ]

    basis = monomial_basis(n, arch.out_degree)
    coeff_exprs = []
    for channel in cur:
        poly = sp.Poly(channel, *xs)
        for e in basis.exponents:
            mono = sp.prod([xs[v] ** e[v] for v in range(n)])
            coeff_exprs.append(poly.coeff_monomial(mono))

    subs = {}
    params = []
    for layer, m in enumerate(matrices):
        for i in range(m.shape[0]):
            for j in range(m.shape[1]):
                subs[wsyms[layer][i][j]] = int(m[i, j])
                params.append(wsyms[layer][i][j])

    jac = np.zeros((len(coeff_exprs), len(params)), dtype=np.int64)
    for row, expr in enumerate(coeff_exprs):
        expr = sp.sympify(expr)
        for col, w in enumerate(params):
            jac[row, col] = int(sp.diff(expr, w).subs(subs)) % p
    return jac


def oracle_rank(matrix, p: int) -> int:
    """Largest non-vanishing minor mod p (exact integer determinants).

    Only feasible for small matrices; used to validate the elimination
    kernel independently.
    """
    m = sp.Matrix([[int(v) % p for v in row] for row in matrix])
    rows, cols = m.shape
    for size in range(min(rows, cols), 0, -1):
        for rsel in itertools.combinations(range(rows), size):
            for csel in itertools.combinations(range(cols), size):
                sub = m[list(rsel), list(csel)]
                if int(sub.det()) % p != 0:
                    return size
    return 0


def small_param_architectures(max_params: int = 6, rs=(1, 2, 3)):
    """Every architecture with at most `max_params` weight entries."""
    found = []

    def extend(widths, params):
        if len(widths) >= 2:
            found.append(tuple(widths))
        if len(widths) >= 7:
            return
        for w in range(1, max_params + 1):
            cost = widths[-1] * w
            if params + cost <= max_params:
                extend(widths + [w], params + cost)

    for d0 in range(1, max_params + 1):
        extend([d0], 0)
    return [Architecture(w, r) for w in found for r in rs]


def random_small_architecture(rng: np.random.Generator, max_ambient: int = 2000) -> Architecture:
    """Random architecture with L <= 5, widths <= 5, r <= 3 and a bounded
    ambient dimension so rank tests stay fast."""
    while True:
        depth = int(rng.integers(1, 6))
        widths = tuple(int(v) for v in rng.integers(1, 6, size=depth + 1))
        r = int(rng.integers(1, 4))
        deg = r ** (depth - 1)
        ambient = widths[-1] * math.comb(widths[0] + deg - 1, deg)
        if ambient <= max_ambient:
            return Architecture(widths, r)
