"""Pure-Python (numpy) implementations of the hot GF(p) kernels.

Semantics must match ``_ckernels`` exactly; the backend test suite
cross-checks the two on random inputs.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def _as_matrix(a):
    m = np.ascontiguousarray(np.asarray(a, dtype=np.int64))
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {m.shape}")
    return m


def rref(a, p):
    """Reduced row-echelon form over GF(p).

    Returns ``(r, pivots)`` where ``r`` has zero rows dropped, pivot entries
    are 1 and pivot columns (strictly increasing) carry the only nonzero
    entry of their column.
    """
    m = _as_matrix(a) % p
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        m = (m - col[:, None] * m[r][None, :]) % p
        pivots.append(c)
        r += 1
    return m[:r].copy(), np.asarray(pivots, dtype=np.int64)


def nullspace(a, p):
    """Canonical (rref) basis of ``{x : a @ x = 0 mod p}``, rows = vectors."""
    m = _as_matrix(a)
    cols = m.shape[1]
    red, pivots = rref(m, p)
    pivset = set(int(c) for c in pivots)
    free = [c for c in range(cols) if c not in pivset]
    if not free:
        return np.zeros((0, cols), dtype=np.int64)
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for j, c in enumerate(pivots):
            basis[i, int(c)] = (-int(red[j, f])) % p
    out, _ = rref(basis, p)
    return out


def solve(a, b, p):
    """One solution of ``a @ x = b mod p`` (free variables zeroed), or None."""
    m = _as_matrix(a)
    rhs = np.asarray(b, dtype=np.int64).reshape(-1)
    if rhs.shape[0] != m.shape[0]:
        raise ValueError("dimension mismatch between matrix and right-hand side")
    aug = np.concatenate([m, rhs[:, None]], axis=1)
    red, pivots = rref(aug, p)
    cols = m.shape[1]
    if len(pivots) and int(pivots[-1]) == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for j, c in enumerate(pivots):
        x[int(c)] = int(red[j, cols])
    return x


def batch_mul(x, y, table, p):
    """Row-wise structure-constant products: ``out[n] = x[n] * y[n]``.

    ``table[i, j]`` holds the coordinates of the product of basis elements
    i and j. Entries are assumed reduced mod p (p <= 2^16), so the int64
    accumulations below cannot overflow.
    """
    xm = np.asarray(x, dtype=np.int64)
    ym = np.asarray(y, dtype=np.int64)
    t = np.asarray(table, dtype=np.int64)
    d = t.shape[0]
    if xm.ndim == 1:
        xm = xm[None, :]
        ym = ym[None, :]
    n = xm.shape[0]
    if d == 0 or n == 0:
        return np.zeros((n, d), dtype=np.int64)
    # tmp[n, j, k] = sum_i x[n, i] table[i, j, k]
    tmp = (xm @ t.reshape(d, d * d)).reshape(n, d, d) % p
    out = np.einsum("nj,njk->nk", ym, tmp) % p
    return out
