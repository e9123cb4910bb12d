"""Numpy implementations of the modular arithmetic kernels.

This is the fallback backend: every function here has a compiled twin in
``_speedups.pyx`` with identical semantics.  All arrays are int64 with
entries reduced to [0, p); p must satisfy p <= 2**31 - 1 so that a product
of two residues fits in an int64 without overflow.

Accumulation discipline: a single product a*b < p**2 < 2**62 may be added
to a reduced value before taking ``% p``; sums of several unreduced
products are never formed.
"""

from __future__ import annotations

import numpy as np

# Largest modulus the int64 kernels accept.
MAX_KERNEL_PRIME = 2**31 - 1


def conv_acc(out, a, b, p):
    """out[i+j] += a[i]*b[j] mod p (dense 1-D convolution accumulate)."""
    nb = b.shape[0]
    for i in range(a.shape[0]):
        ai = int(a[i])
        if ai:
            out[i : i + nb] = (out[i : i + nb] + ai * b) % p


def conv_table_acc(out, a, b, tbl, p):
    """out[tbl[i, j]] += a[i]*b[j] mod p.

    ``tbl`` maps monomial index pairs to product indices; for a fixed i the
    row tbl[i] has distinct targets, so fancy indexing is safe.
    """
    for i in range(a.shape[0]):
        ai = int(a[i])
        if ai:
            idx = tbl[i]
            out[idx] = (out[idx] + ai * b) % p


def conv_many_acc(out, g, t, p):
    """Row-wise convolution accumulate: out[j] += conv(g, t[j]) mod p.

    ``t`` is (rows, len_t), ``out`` is (rows, len_g + len_t - 1).
    """
    nt = t.shape[1]
    for i in range(g.shape[0]):
        gi = int(g[i])
        if gi:
            out[:, i : i + nt] = (out[:, i : i + nt] + gi * t) % p


def conv_table_many_acc(out, g, t, tbl, p):
    """Row-wise table convolution: out[j, tbl[i, k]] += g[i]*t[j, k] mod p."""
    for i in range(g.shape[0]):
        gi = int(g[i])
        if gi:
            idx = tbl[i]
            out[:, idx] = (out[:, idx] + gi * t) % p


def axpy_acc(out, c, x, p):
    """out += c*x mod p for 1-D vectors."""
    c = int(c) % p
    if c:
        out[:] = (out + c * x) % p


def axpy2_acc(out, c, x, p):
    """out += c*x mod p for 2-D blocks."""
    c = int(c) % p
    if c:
        out[:] = (out + c * x) % p


def rank_mod(m, p):
    """Rank of an int64 matrix over F_p by in-place Gaussian elimination.

    The matrix is destroyed.  Entries must already be reduced to [0, p).
    """
    rows, cols = m.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(m[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        inv = pow(int(m[rank, col]), p - 2, p)
        m[rank, col:] = (m[rank, col:] * inv) % p
        below = np.nonzero(m[rank + 1 :, col])[0]
        if below.size:
            idx = rank + 1 + below
            m[idx, col:] = (m[idx, col:] - np.outer(m[idx, col], m[rank, col:])) % p
        rank += 1
    return rank
