"""Finite-dimensional associative algebras over GF(p) via structure constants.

An algebra of dimension d is stored as a (d, d, d) table T with T[i, j] the
coordinates of the product of basis elements i and j. Associativity is
checked at construction; a two-sided unit is auto-detected when not given.
The dim-0 zero algebra is a distinguished value with trivial behaviour.
"""

from __future__ import annotations

import hashlib
from typing import TYPE_CHECKING

import numpy as np

from . import kernels
from .errors import BudgetExceeded
from .fields import FVector, PrimeField, _check_prime, _freeze

if TYPE_CHECKING:
    from .subspaces import Subspace


def _find_unit(table, p):
    """Solve the two-sided unit equations; returns coords or None."""
    d = table.shape[0]
    if d == 0:
        return None
    eye = np.eye(d, dtype=np.int64)
    left = table.transpose(1, 2, 0).reshape(d * d, d)   # rows (j,k): sum_i u_i T[i,j,k] = I[j,k]
    right = table.transpose(0, 2, 1).reshape(d * d, d)  # rows (i,k): sum_j u_j T[i,j,k] = I[i,k]
    a = np.concatenate([left, right], axis=0)
    b = np.concatenate([eye.reshape(-1), eye.reshape(-1)])
    return kernels.solve(a, b, p)


class Algebra:
    """An associative GF(p)-algebra given by structure constants."""

    def __init__(self, p, table, unit=None, basis_names=None, aid=None, check=True):
        self.p = _check_prime(p)
        tab = np.asarray(table, dtype=np.int64) % self.p
        if tab.ndim != 3 or len(set(tab.shape)) > 1:
            raise ValueError(f"structure table must be (d, d, d), got {tab.shape}")
        self.dim = tab.shape[0]
        self.table = _freeze(tab)
        self.field = PrimeField(self.p)
        self.basis_names = list(basis_names) if basis_names is not None else None
        if self.basis_names is not None and len(self.basis_names) != self.dim:
            raise ValueError("basis_names length must equal dim")
        self.aid = aid
        if check:
            self._check_associativity()
        if unit is None:
            u = _find_unit(self.table, self.p)
        else:
            u = np.asarray(unit, dtype=np.int64).reshape(-1) % self.p
            if u.shape[0] != self.dim:
                raise ValueError("unit length must equal dim")
        self.unit = None if u is None else FVector(self.p, u)
        if unit is not None:
            self._check_unit()
        self._cache = {}

    def _check_associativity(self):
        t = self.table
        if self.dim == 0:
            return
        lhs = np.einsum("ijm,mkl->ijkl", t, t) % self.p
        rhs = np.einsum("jkm,iml->ijkl", t, t) % self.p
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            i, j, k, _ = bad[0]
            raise ValueError(f"table is not associative at basis triple ({i}, {j}, {k})")

    def _check_unit(self):
        u = self.unit.coords
        eye = np.eye(self.dim, dtype=np.int64)
        left = np.einsum("i,ijk->jk", u, self.table) % self.p
        right = np.einsum("j,ijk->ik", u, self.table) % self.p
        if not (left == eye).all() or not (right == eye).all():
            raise ValueError("claimed unit is not a two-sided unit")

    @property
    def is_unital(self):
        return self.unit is not None

    @property
    def fingerprint(self):
        key = "fingerprint"
        if key not in self._cache:
            h = hashlib.blake2s(digest_size=12)
            h.update(f"{self.p}:{self.dim}:".encode())
            h.update(self.table.tobytes())
            self._cache[key] = h.hexdigest()
        return self._cache[key]

    def element(self, coords):
        return AlgebraElement(self, coords)

    def zero_element(self):
        return AlgebraElement(self, np.zeros(self.dim, dtype=np.int64))

    def basis_element(self, i):
        c = np.zeros(self.dim, dtype=np.int64)
        c[i] = 1
        return AlgebraElement(self, c)

    def basis_elements(self):
        return [self.basis_element(i) for i in range(self.dim)]

    def unit_element(self):
        if self.unit is None:
            raise ValueError("algebra has no unit")
        return AlgebraElement(self, self.unit.coords)

    def mul_coords(self, x, y):
        """Product of two coordinate rows (raw ndarray path)."""
        return kernels.batch_mul(x, y, self.table, self.p)[0]

    def batch_mul(self, xs, ys):
        return kernels.batch_mul(xs, ys, self.table, self.p)

    def left_mult_matrix(self, x):
        """Matrix L with L @ y = coords(x * y)."""
        return np.einsum("i,ijk->kj", np.asarray(x, dtype=np.int64), self.table) % self.p

    def right_mult_matrix(self, y):
        """Matrix R with R @ x = coords(x * y)."""
        return np.einsum("j,ijk->ki", np.asarray(y, dtype=np.int64), self.table) % self.p

    def element_count(self):
        return self.p**self.dim

    def coords_block(self, start, count):
        """Rows start..start+count-1 of the canonical element enumeration.

        Element #n has coordinates given by the base-p digits of n,
        coordinate 0 least significant.
        """
        idx = np.arange(start, start + count, dtype=np.int64)
        out = np.empty((count, self.dim), dtype=np.int64)
        for j in range(self.dim):
            out[:, j] = idx % self.p
            idx = idx // self.p
        return out

    def all_coords(self, budget):
        n = self.element_count()
        if n > budget:
            raise BudgetExceeded("element enumeration", n, budget)
        return self.coords_block(0, n)

    def enumerate_elements(self, budget):
        """All p^dim elements exactly once; raises BudgetExceeded when too many."""
        rows = self.all_coords(budget)
        for r in rows:
            yield AlgebraElement(self, r)

    def __eq__(self, other):
        return self is other or (
            isinstance(other, Algebra)
            and self.p == other.p
            and self.dim == other.dim
            and bool((self.table == other.table).all())
            and self.unit == other.unit
        )

    def __hash__(self):
        return hash((self.p, self.dim, self.table.tobytes()))

    def __repr__(self):
        name = self.aid or "Algebra"
        return f"<{name}: dim {self.dim} over GF({self.p}){', unital' if self.is_unital else ''}>"


class AlgebraElement:
    """A coordinate vector in the owning algebra's basis."""

    __slots__ = ("algebra", "_coords")

    def __init__(self, algebra, coords):
        self.algebra = algebra
        arr = np.asarray(coords, dtype=np.int64).reshape(-1) % algebra.p
        if arr.shape[0] != algebra.dim:
            raise ValueError("coordinate length must equal algebra dimension")
        self._coords = _freeze(arr)

    @property
    def coords(self):
        return self._coords

    def to_list(self):
        return [int(x) for x in self._coords]

    def is_zero(self):
        return not self._coords.any()

    def _same(self, other):
        if not isinstance(other, AlgebraElement) or other.algebra is not self.algebra:
            if isinstance(other, AlgebraElement) and other.algebra == self.algebra:
                return
            raise ValueError("elements belong to different algebras")

    def __add__(self, other):
        self._same(other)
        return AlgebraElement(self.algebra, self._coords + other._coords)

    def __sub__(self, other):
        self._same(other)
        return AlgebraElement(self.algebra, self._coords - other._coords)

    def __neg__(self):
        return AlgebraElement(self.algebra, -self._coords)

    def scale(self, c):
        return AlgebraElement(self.algebra, self._coords * (int(c) % self.algebra.p))

    def __mul__(self, other):
        self._same(other)
        return AlgebraElement(self.algebra, self.algebra.mul_coords(self._coords, other._coords))

    def bracket(self, other):
        """Commutator [self, other] = self*other - other*self."""
        self._same(other)
        a = self.algebra
        xy = a.mul_coords(self._coords, other._coords)
        yx = a.mul_coords(other._coords, self._coords)
        return AlgebraElement(a, xy - yx)

    def power(self, n):
        if n < 1:
            raise ValueError("power expects n >= 1")
        acc = self
        for _ in range(n - 1):
            acc = acc * self
        return acc

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraElement)
            and self.algebra == other.algebra
            and bool((self._coords == other._coords).all())
        )

    def __hash__(self):
        return hash((id(self.algebra), self._coords.tobytes()))

    def __repr__(self):
        return f"El{self.to_list()}"


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b


def bracket(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a.bracket(b)


class Unitization:
    """Minimal unitization over GF(p): identity when the base is unital,
    otherwise dimension d+1 with the adjoined unit in coordinate 0."""

    def __init__(self, base):
        self.base = base
        if base.is_unital:
            self.result = base
            self.is_identity = True
            return
        self.is_identity = False
        d = base.dim
        p = base.p
        table = np.zeros((d + 1, d + 1, d + 1), dtype=np.int64)
        table[0, 0, 0] = 1
        for i in range(d):
            table[0, i + 1, i + 1] = 1
            table[i + 1, 0, i + 1] = 1
        table[1:, 1:, 1:] = base.table
        unit = np.zeros(d + 1, dtype=np.int64)
        unit[0] = 1
        name = f"{base.aid}~" if base.aid else None
        self.result = Algebra(p, table, unit=unit, aid=name)

    def embed(self, x: AlgebraElement) -> AlgebraElement:
        if self.is_identity:
            return x
        c = np.zeros(self.result.dim, dtype=np.int64)
        c[1:] = x.coords
        return AlgebraElement(self.result, c)

    def embed_rows(self, rows):
        if self.is_identity:
            return np.asarray(rows, dtype=np.int64)
        rows = np.asarray(rows, dtype=np.int64)
        out = np.zeros((rows.shape[0], self.result.dim), dtype=np.int64)
        out[:, 1:] = rows
        return out

    def project(self, y: AlgebraElement) -> AlgebraElement:
        if self.is_identity:
            return y
        if int(y.coords[0]) != 0:
            raise ValueError("element is not in the embedded copy of the base algebra")
        return AlgebraElement(self.base, y.coords[1:])

    def project_rows(self, rows):
        if self.is_identity:
            return np.asarray(rows, dtype=np.int64)
        rows = np.asarray(rows, dtype=np.int64)
        if rows[:, 0].any():
            raise ValueError("rows are not in the embedded copy of the base algebra")
        return rows[:, 1:].copy()


def unitize(a: Algebra) -> Unitization:
    key = "unitization"
    if key not in a._cache:
        a._cache[key] = Unitization(a)
    return a._cache[key]


def matrix_algebra(n, p, aid=None) -> Algebra:
    """Full matrix algebra M_n(GF(p)) on the basis E_ij, row-major."""
    if n < 1:
        raise ValueError("n >= 1 required")
    d = n * n
    table = np.zeros((d, d, d), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    if j == k:
                        table[i * n + j, k * n + l, i * n + l] = 1
    unit = np.zeros(d, dtype=np.int64)
    for i in range(n):
        unit[i * n + i] = 1
    names = [f"E{i+1}{j+1}" for i in range(n) for j in range(n)]
    return Algebra(p, table, unit=unit, basis_names=names, aid=aid or f"M{n}(F{p})")


def triangular_algebra(n, p, aid=None) -> Algebra:
    """Upper-triangular n x n matrices over GF(p) on the E_ij, i <= j."""
    if n < 1:
        raise ValueError("n >= 1 required")
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    index = {pr: k for k, pr in enumerate(pairs)}
    d = len(pairs)
    table = np.zeros((d, d, d), dtype=np.int64)
    for (i, j), a in index.items():
        for (k, l), b in index.items():
            if j == k:
                table[a, b, index[(i, l)]] = 1
    unit = np.zeros(d, dtype=np.int64)
    for i in range(n):
        unit[index[(i, i)]] = 1
    names = [f"E{i+1}{j+1}" for (i, j) in pairs]
    return Algebra(p, table, unit=unit, basis_names=names, aid=aid or f"T{n}(F{p})")


def truncated_poly(k, p, aid=None) -> Algebra:
    """GF(p)[t] / (t^k) on the basis 1, t, ..., t^(k-1)."""
    if k < 1:
        raise ValueError("k >= 1 required")
    table = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            if i + j < k:
                table[i, j, i + j] = 1
    unit = np.zeros(k, dtype=np.int64)
    unit[0] = 1
    names = ["1"] + [f"t^{i}" if i > 1 else "t" for i in range(1, k)]
    return Algebra(p, table, unit=unit, basis_names=names, aid=aid or f"F{p}[t]/(t^{k})")


def zero_mult_algebra(dim, p, aid=None) -> Algebra:
    """The dim-dimensional algebra with identically zero multiplication."""
    table = np.zeros((dim, dim, dim), dtype=np.int64)
    return Algebra(p, table, aid=aid or f"Z{dim}(F{p})")


def direct_sum(a: Algebra, b: Algebra, aid=None) -> Algebra:
    if a.p != b.p:
        raise ValueError("direct sum needs a common prime field")
    da, db = a.dim, b.dim
    d = da + db
    table = np.zeros((d, d, d), dtype=np.int64)
    table[:da, :da, :da] = a.table
    table[da:, da:, da:] = b.table
    unit = None
    if a.is_unital and b.is_unital:
        unit = np.concatenate([a.unit.coords, b.unit.coords])
    return Algebra(a.p, table, unit=unit, aid=aid or f"({a.aid})+({b.aid})")


def opposite(a: Algebra, aid=None) -> Algebra:
    table = np.ascontiguousarray(a.table.transpose(1, 0, 2))
    unit = None if a.unit is None else a.unit.coords
    return Algebra(a.p, table, unit=unit, aid=aid or (f"{a.aid}^op" if a.aid else None))


class QuotientMap:
    """Projection A -> A/I with a linear section on a complement basis."""

    def __init__(self, source, ideal_basis, ideal_pivots, quotient):
        self.source = source
        self.quotient = quotient
        self._basis = ideal_basis
        self._pivots = list(ideal_pivots)
        pivset = set(self._pivots)
        self._complement = [c for c in range(source.dim) if c not in pivset]

    def reduce_rows(self, rows):
        rows = np.asarray(rows, dtype=np.int64).copy() % self.source.p
        for r, c in zip(self._basis, self._pivots):
            f = rows[:, c].copy()
            rows = (rows - f[:, None] * r[None, :]) % self.source.p
        return rows

    def project_coords(self, rows):
        red = self.reduce_rows(np.atleast_2d(rows))
        return red[:, self._complement]

    def project(self, x: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(self.quotient, self.project_coords(x.coords)[0])

    def lift_coords(self, rows):
        rows = np.atleast_2d(np.asarray(rows, dtype=np.int64))
        out = np.zeros((rows.shape[0], self.source.dim), dtype=np.int64)
        out[:, self._complement] = rows
        return out

    def lift(self, q: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(self.source, self.lift_coords(q.coords)[0])


def quotient(a: Algebra, i: "Subspace"):
    """Quotient algebra A/I with its projection; I must be a two-sided ideal."""
    from .subspaces import is_two_sided_ideal

    if i.algebra is not a and i.algebra != a:
        raise ValueError("subspace belongs to a different algebra")
    if not is_two_sided_ideal(i):
        raise ValueError("subspace is not a two-sided ideal")
    basis = i.basis_array
    pivots = i.pivots
    qdim = a.dim - basis.shape[0]
    qname = f"{a.aid}/I" if a.aid else None
    if qdim == 0:
        qa = Algebra(a.p, np.zeros((0, 0, 0), dtype=np.int64), aid=qname)
        return qa, QuotientMap(a, basis, pivots, qa)
    pivset = set(pivots)
    complement = [c for c in range(a.dim) if c not in pivset]
    # temporary map to build the induced table
    tmp = QuotientMap(a, basis, pivots, None)
    reps = np.zeros((qdim, a.dim), dtype=np.int64)
    for k, c in enumerate(complement):
        reps[k, c] = 1
    table = np.zeros((qdim, qdim, qdim), dtype=np.int64)
    left = np.repeat(reps, qdim, axis=0)
    right = np.tile(reps, (qdim, 1))
    prods = a.batch_mul(left, right)
    table = tmp.project_coords(prods).reshape(qdim, qdim, qdim)
    qa = Algebra(a.p, table, aid=qname)
    return qa, QuotientMap(a, basis, pivots, qa)
