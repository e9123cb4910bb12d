# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled modular arithmetic kernels (hot paths).

Semantics match _purekernels exactly: int64 arrays reduced to [0, p),
p <= 2**31 - 1.  Convolutions accumulate per output coefficient in a
128-bit register and reduce once, which is the main win over the numpy
backend besides loop overhead.
"""

from libc.stdint cimport int64_t

cdef extern from *:
    ctypedef long long int128 "__int128"

MAX_KERNEL_PRIME = 2**31 - 1


def conv_acc(int64_t[::1] out, const int64_t[::1] a, const int64_t[::1] b, int64_t p):
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0]
    cdef Py_ssize_t k, i, lo, hi
    cdef int128 acc
    with nogil:
        for k in range(na + nb - 1):
            acc = out[k]
            lo = 0 if k < nb else k - nb + 1
            hi = k if k < na - 1 else na - 1
            for i in range(lo, hi + 1):
                acc = acc + <int128> a[i] * b[k - i]
            out[k] = <int64_t> (acc % p)


def conv_table_acc(int64_t[::1] out, const int64_t[::1] a, const int64_t[::1] b,
                   const int64_t[:, :] tbl, int64_t p):
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0]
    cdef Py_ssize_t i, j, t
    cdef int64_t ai
    with nogil:
        for i in range(na):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(nb):
                t = tbl[i, j]
                out[t] = (out[t] + ai * b[j]) % p


def conv_many_acc(int64_t[:, :] out, const int64_t[::1] g, const int64_t[:, :] t, int64_t p):
    cdef Py_ssize_t rows = t.shape[0], ng = g.shape[0], nt = t.shape[1]
    cdef Py_ssize_t j, k, i, lo, hi
    cdef int128 acc
    with nogil:
        for j in range(rows):
            for k in range(ng + nt - 1):
                acc = out[j, k]
                lo = 0 if k < nt else k - nt + 1
                hi = k if k < ng - 1 else ng - 1
                for i in range(lo, hi + 1):
                    acc = acc + <int128> g[i] * t[j, k - i]
                out[j, k] = <int64_t> (acc % p)


def conv_table_many_acc(int64_t[:, :] out, const int64_t[::1] g, const int64_t[:, :] t,
                        const int64_t[:, :] tbl, int64_t p):
    cdef Py_ssize_t rows = t.shape[0], ng = g.shape[0], nt = t.shape[1]
    cdef Py_ssize_t i, j, k, tk
    cdef int64_t gi
    with nogil:
        for i in range(ng):
            gi = g[i]
            if gi == 0:
                continue
            for j in range(rows):
                for k in range(nt):
                    tk = tbl[i, k]
                    out[j, tk] = (out[j, tk] + gi * t[j, k]) % p


def axpy_acc(int64_t[::1] out, int64_t c, const int64_t[::1] x, int64_t p):
    cdef Py_ssize_t i, n = out.shape[0]
    c = c % p
    if c == 0:
        return
    with nogil:
        for i in range(n):
            out[i] = (out[i] + c * x[i]) % p


def axpy2_acc(int64_t[:, :] out, int64_t c, const int64_t[:, :] x, int64_t p):
    cdef Py_ssize_t i, j, rows = out.shape[0], cols = out.shape[1]
    c = c % p
    if c == 0:
        return
    with nogil:
        for i in range(rows):
            for j in range(cols):
                out[i, j] = (out[i, j] + c * x[i, j]) % p


cdef int64_t _pow_mod(int64_t base, int64_t e, int64_t p) nogil:
    cdef int64_t result = 1
    base = base % p
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def rank_mod(int64_t[:, :] m, int64_t p):
    """Rank over F_p by in-place Gaussian elimination (matrix destroyed)."""
    cdef Py_ssize_t rows = m.shape[0], cols = m.shape[1]
    cdef Py_ssize_t rank = 0, col, r, c, piv
    cdef int64_t inv, f, tmp
    with nogil:
        for col in range(cols):
            if rank == rows:
                break
            piv = -1
            for r in range(rank, rows):
                if m[r, col] != 0:
                    piv = r
                    break
            if piv < 0:
                continue
            if piv != rank:
                for c in range(col, cols):
                    tmp = m[rank, c]
                    m[rank, c] = m[piv, c]
                    m[piv, c] = tmp
            inv = _pow_mod(m[rank, col], p - 2, p)
            for c in range(col, cols):
                m[rank, c] = (m[rank, c] * inv) % p
            for r in range(rank + 1, rows):
                f = m[r, col]
                if f != 0:
                    for c in range(col, cols):
                        tmp = (m[r, c] - f * m[rank, c]) % p
                        if tmp < 0:
                            tmp += p
                        m[r, c] = tmp
            rank += 1
    return rank
