# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(p) kernels: rref, nullspace, solve, batched products.

Observationally identical to ``_pykernels``; cross-checked by the test suite.
"""

import numpy as np

cimport cython
cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "c"


cdef inline long long mod_inv(long long a, long long p):
    # Fermat: a^(p-2) mod p, p prime.
    cdef long long result = 1
    cdef long long base = a % p
    cdef long long e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


cdef long long _rref_inplace(long long[:, ::1] m, long long p, long long* piv_out):
    cdef Py_ssize_t rows = m.shape[0]
    cdef Py_ssize_t cols = m.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, k
    cdef long long inv, f, tmp
    cdef Py_ssize_t npiv = 0
    for i in range(rows):
        for j in range(cols):
            m[i, j] = m[i, j] % p
            if m[i, j] < 0:
                m[i, j] += p
    for c in range(cols):
        if r == rows:
            break
        k = -1
        for i in range(r, rows):
            if m[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(cols):
                tmp = m[r, j]
                m[r, j] = m[k, j]
                m[k, j] = tmp
        inv = mod_inv(m[r, c], p)
        for j in range(cols):
            m[r, j] = (m[r, j] * inv) % p
        for i in range(rows):
            if i != r and m[i, c] != 0:
                f = m[i, c]
                for j in range(cols):
                    m[i, j] = (m[i, j] - f * m[r, j]) % p
                    if m[i, j] < 0:
                        m[i, j] += p
        piv_out[npiv] = c
        npiv += 1
        r += 1
    return npiv


def rref(a, p):
    """Reduced row-echelon form over GF(p); returns (matrix, pivot columns)."""
    cdef cnp.ndarray[long long, ndim=2] m = np.ascontiguousarray(a, dtype=np.int64).copy()
    if m.ndim != 2:
        raise ValueError("expected a 2-d array")
    cdef long long pp = p
    cdef Py_ssize_t cols = m.shape[1]
    cdef cnp.ndarray[long long, ndim=1] piv = np.empty(min(m.shape[0], cols), dtype=np.int64)
    cdef long long npiv = 0
    if m.shape[0] and cols:
        npiv = _rref_inplace(m, pp, <long long*> piv.data)
    return m[:npiv].copy(), piv[:npiv].copy()


def nullspace(a, p):
    """Canonical (rref) basis of the right kernel of ``a`` over GF(p)."""
    m = np.ascontiguousarray(a, dtype=np.int64)
    cdef Py_ssize_t cols = m.shape[1]
    red, pivots = rref(m, p)
    pivset = set(int(c) for c in pivots)
    free = [c for c in range(cols) if c not in pivset]
    if not free:
        return np.zeros((0, cols), dtype=np.int64)
    basis = np.zeros((len(free), cols), dtype=np.int64)
    cdef Py_ssize_t i, j
    for i, f in enumerate(free):
        basis[i, f] = 1
        for j in range(len(pivots)):
            basis[i, int(pivots[j])] = (-int(red[j, f])) % p
    out, _ = rref(basis, p)
    return out


def solve(a, b, p):
    """One solution of ``a @ x = b mod p`` (free variables zeroed), or None."""
    m = np.ascontiguousarray(a, dtype=np.int64)
    rhs = np.asarray(b, dtype=np.int64).reshape(-1)
    if rhs.shape[0] != m.shape[0]:
        raise ValueError("dimension mismatch between matrix and right-hand side")
    aug = np.concatenate([m, rhs[:, None]], axis=1)
    red, pivots = rref(aug, p)
    cdef Py_ssize_t cols = m.shape[1]
    if len(pivots) and int(pivots[-1]) == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for j, c in enumerate(pivots):
        x[int(c)] = int(red[j, cols])
    return x


def batch_mul(x, y, table, p):
    """Row-wise structure-constant products: ``out[n] = x[n] * y[n]``."""
    xm = np.ascontiguousarray(x, dtype=np.int64)
    ym = np.ascontiguousarray(y, dtype=np.int64)
    t = np.ascontiguousarray(table, dtype=np.int64)
    squeeze = False
    if xm.ndim == 1:
        xm = xm[None, :]
        ym = ym[None, :]
        squeeze = True
    cdef const long long[:, ::1] xv = xm
    cdef const long long[:, ::1] yv = ym
    cdef Py_ssize_t n = xm.shape[0]
    cdef Py_ssize_t d = t.shape[0]
    cdef cnp.ndarray[long long, ndim=2] out = np.zeros((n, d), dtype=np.int64)
    cdef long long[:, ::1] ov = out
    cdef const long long[:, :, ::1] tv = t
    cdef Py_ssize_t row, i, j, k
    cdef long long xi, c, pp = p
    if d:
        for row in range(n):
            for i in range(d):
                xi = xv[row, i]
                if xi == 0:
                    continue
                for j in range(d):
                    c = (xi * yv[row, j]) % pp
                    if c == 0:
                        continue
                    for k in range(d):
                        if tv[i, j, k] != 0:
                            ov[row, k] = (ov[row, k] + c * tv[i, j, k]) % pp
    return out
