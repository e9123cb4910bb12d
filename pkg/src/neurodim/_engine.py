"""Array-level evaluation of the parameter map and its Jacobian.

This is the hot path behind rank certification.  Polynomials are raw int64
coefficient vectors; a Jacobian block for one weight matrix is built by
seeding the layer's tangents with the incoming polynomials and pushing the
whole block through the remaining layers at once (rows of a 2-D array are
tangent columns, so the kernels stream along contiguous memory).

Column k of the result equals the infinitesimal part of the forward pass
with a dual seed on parameter k; tests cross-check this against the
definitional dual-number evaluation and a symbolic oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernel as K
from .algebra import Prime, monomial_basis, mul_table
from .errors import DegreeOverflow
from .pnn import DEFAULT_AMBIENT_CAP, Architecture, ambient_dim, param_count

__all__ = ["plan_for", "sample_weights", "forward_coeffs", "jacobian_matrix"]


@dataclass(frozen=True)
class ArchPlan:
    widths: tuple[int, ...]
    r: int
    depth: int
    num_vars: int
    deg_in: tuple[int, ...]  # degree of the polys entering matrix k (= r**k)
    len_in: tuple[int, ...]  # basis length at each of those degrees
    g_len: tuple[int, ...]  # basis length of the activation derivative per layer
    out_len: int  # basis length of one output channel
    ambient: int
    params: int
    offsets: tuple[int, ...]  # first Jacobian column of each layer block


@lru_cache(maxsize=None)
def plan_for(widths: tuple[int, ...], r: int, ambient_cap: int | None = None) -> ArchPlan:
    arch = Architecture(widths, r)
    cap = DEFAULT_AMBIENT_CAP if ambient_cap is None else ambient_cap
    amb = ambient_dim(arch)
    if amb > cap:
        raise DegreeOverflow(f"ambient dimension {amb} exceeds cap {cap}")
    n = arch.num_vars
    L = arch.depth

    def blen(deg: int) -> int:
        return math.comb(n + deg - 1, deg)

    deg_in = tuple(r**k for k in range(L))
    len_in = tuple(blen(d) for d in deg_in)
    g_len = tuple(blen((r - 1) * d) for d in deg_in[: L - 1])
    offsets = []
    acc = 0
    for k in range(L):
        offsets.append(acc)
        acc += widths[k + 1] * widths[k]
    return ArchPlan(
        widths=tuple(widths),
        r=r,
        depth=L,
        num_vars=n,
        deg_in=deg_in,
        len_in=len_in,
        g_len=g_len,
        out_len=blen(r ** (L - 1)),
        ambient=amb,
        params=param_count(arch),
        offsets=tuple(offsets),
    )


def sample_weights(arch: Architecture, prime: Prime, seed: int, trial: int) -> list[np.ndarray]:
    """Per-trial weight matrices from a splittable seed; all-zero matrices
    are resampled so the base point is never fully degenerate."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(trial),))
    rng = np.random.Generator(np.random.PCG64(ss))
    mats = []
    for k in range(1, len(arch.widths)):
        shape = (arch.widths[k], arch.widths[k - 1])
        m = rng.integers(0, prime.p, size=shape, dtype=np.int64)
        while not m.any():
            m = rng.integers(0, prime.p, size=shape, dtype=np.int64)
        mats.append(m)
    return mats


def _matmul_mod(w: np.ndarray, x: list[np.ndarray], p: int) -> list[np.ndarray]:
    """rows of w combined with the vectors x, reduced mod p per addend."""
    out = [np.zeros(x[0].shape[0], dtype=np.int64) for _ in range(w.shape[0])]
    for i in range(w.shape[0]):
        row = out[i]
        for j in range(w.shape[1]):
            K.axpy_acc(row, int(w[i, j]), x[j], p)
    return out


def _conv(a: np.ndarray, b: np.ndarray, n: int, da: int, db: int, p: int) -> np.ndarray:
    out = np.zeros(math.comb(n + da + db - 1, da + db), dtype=np.int64)
    if n == 2:
        K.conv_acc(out, a, b, p)
    else:
        K.conv_table_acc(out, a, b, mul_table(n, da, db), p)
    return out


def _conv_block(g: np.ndarray, t: np.ndarray, n: int, dg: int, dt: int, out_len: int, p: int) -> np.ndarray:
    out = np.zeros((t.shape[0], out_len), dtype=np.int64)
    if n == 2:
        K.conv_many_acc(out, g, t, p)
    else:
        K.conv_table_many_acc(out, g, t, mul_table(n, dg, dt), p)
    return out


def _primal(plan: ArchPlan, weights: list[np.ndarray], p: int):
    """Forward pass keeping, per layer, the incoming polynomials and the
    entrywise activation derivative r * a**(r-1)."""
    n, r, L = plan.num_vars, plan.r, plan.depth
    basis1 = monomial_basis(n, 1)
    x = []
    for j in range(n):
        v = np.zeros(n, dtype=np.int64)
        v[basis1.index_of(tuple(1 if t == j else 0 for t in range(n)))] = 1
        x.append(v)

    inputs: list[list[np.ndarray]] = [x]
    derivs: list[list[np.ndarray]] = []
    out: list[np.ndarray] = []
    for k in range(L):
        a = _matmul_mod(weights[k], inputs[k], p)
        if k == L - 1:
            out = a
            break
        deg = plan.deg_in[k]
        s_rows, g_rows = [], []
        for vec in a:
            pm = np.array([1], dtype=np.int64)  # vec**(r-1), degree (r-1)*deg
            for step in range(1, r):
                pm = _conv(pm, vec, n, (step - 1) * deg, deg, p)
            g_rows.append(pm * r % p)
            s_rows.append(_conv(pm, vec, n, (r - 1) * deg, deg, p))
        inputs.append(s_rows)
        derivs.append(g_rows)
    return inputs, derivs, out


def forward_coeffs(plan: ArchPlan, weights: list[np.ndarray], p: int) -> np.ndarray:
    """Channel-major flattened coefficient vector of the network outputs."""
    _, _, out = _primal(plan, weights, p)
    return np.concatenate(out)


def jacobian_matrix(plan: ArchPlan, weights: list[np.ndarray], p: int) -> np.ndarray:
    """Jacobian of the parameter map at the given weights.

    Rows follow the channel-major coefficient flattening; columns are layer
    by layer, row-major within each weight matrix.
    """
    widths, n, r, L = plan.widths, plan.num_vars, plan.r, plan.depth
    inputs, derivs, _ = _primal(plan, weights, p)
    jac = np.zeros((plan.ambient, plan.params), dtype=np.int64)
    m_out = plan.out_len

    for k in range(L):
        off = plan.offsets[k]
        n_cols = widths[k + 1] * widths[k]
        if k == L - 1:
            for i in range(widths[L]):
                for j in range(widths[L - 1]):
                    jac[i * m_out : (i + 1) * m_out, off + i * widths[L - 1] + j] = inputs[k][j]
            continue

        # Seed step: the tangent of channel i is input_j for column (i, j),
        # so one convolution per channel covers the whole block.
        seed = np.stack(inputs[k])
        dg, dt = (r - 1) * plan.deg_in[k], plan.deg_in[k]
        conv_seed = [
            _conv_block(derivs[k][c], seed, n, dg, dt, plan.len_in[k + 1], p)
            for c in range(widths[k + 1])
        ]
        block = [np.zeros((n_cols, plan.len_in[k + 1]), dtype=np.int64) for _ in range(widths[k + 2])]
        w_next = weights[k + 1]
        for ip in range(widths[k + 2]):
            for c in range(widths[k + 1]):
                rows = slice(c * widths[k], (c + 1) * widths[k])
                K.axpy2_acc(block[ip][rows], int(w_next[ip, c]), conv_seed[c], p)

        for t in range(k + 1, L - 1):
            dg, dt = (r - 1) * plan.deg_in[t], plan.deg_in[t]
            pushed = [
                _conv_block(derivs[t][c], block[c], n, dg, dt, plan.len_in[t + 1], p)
                for c in range(widths[t + 1])
            ]
            block = [np.zeros((n_cols, plan.len_in[t + 1]), dtype=np.int64) for _ in range(widths[t + 2])]
            w_next = weights[t + 1]
            for ip in range(widths[t + 2]):
                for c in range(widths[t + 1]):
                    K.axpy2_acc(block[ip], int(w_next[ip, c]), pushed[c], p)

        for ip in range(widths[L]):
            jac[ip * m_out : (ip + 1) * m_out, off : off + n_cols] = block[ip].T
    return jac
