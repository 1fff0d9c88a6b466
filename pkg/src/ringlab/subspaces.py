"""Subspace calculus on an algebra: lattice ops, bracket and product
subspaces, ideal closure, center, normalizer towers, derived towers,
fullness and full-noncentrality.

Subspaces are stored as canonical reduced row-echelon bases, so equality is
matrix equality and every operation returns a canonical value.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .algebras import Algebra, AlgebraElement
from .fields import FMatrix, _freeze


class Subspace:
    """A subspace of an algebra, held as a canonical rref basis."""

    __slots__ = ("algebra", "_basis", "_pivots", "_hash")

    def __init__(self, algebra, rows=None, _canonical=False):
        self.algebra = algebra
        d = algebra.dim
        if rows is None:
            arr = np.zeros((0, d), dtype=np.int64)
        else:
            arr = np.asarray(rows, dtype=np.int64)
            if arr.ndim == 1:
                arr = arr.reshape(1, -1)
            if arr.size == 0:
                arr = arr.reshape(0, d)
        if arr.shape[1] != d:
            raise ValueError("generator length must equal algebra dimension")
        if _canonical:
            red, piv = arr, _pivots_of(arr)
        else:
            red, piv = kernels.rref(arr, algebra.p)
        self._basis = _freeze(red)
        self._pivots = tuple(int(c) for c in piv)
        self._hash = None

    @property
    def basis_array(self):
        return self._basis

    @property
    def basis(self):
        return FMatrix(self.algebra.p, self._basis.reshape(-1, self.algebra.dim))

    @property
    def pivots(self):
        return self._pivots

    @property
    def dim(self):
        return self._basis.shape[0]

    def is_zero(self):
        return self.dim == 0

    def basis_elements(self):
        return [AlgebraElement(self.algebra, r) for r in self._basis]

    def generators(self):
        """Basis rows as plain int lists (the wire format for subspaces)."""
        return [[int(x) for x in row] for row in self._basis]

    def reduce_rows(self, rows):
        """Reduce coordinate rows modulo this subspace's basis."""
        p = self.algebra.p
        rows = np.atleast_2d(np.asarray(rows, dtype=np.int64)) % p
        out = rows.copy()
        for r, c in zip(self._basis, self._pivots):
            f = out[:, c].copy()
            if f.any():
                out = (out - f[:, None] * r[None, :]) % p
        return out

    def contains_row(self, row):
        return not self.reduce_rows(row).any()

    def __contains__(self, x: AlgebraElement):
        return self.contains_row(x.coords)

    def __le__(self, other: "Subspace"):
        _same_algebra(self, other)
        if self.dim > other.dim:
            return False
        return not other.reduce_rows(self._basis).any() if self.dim else True

    def __lt__(self, other):
        return self <= other and self.dim < other.dim

    def __add__(self, other: "Subspace"):
        _same_algebra(self, other)
        return Subspace(self.algebra, np.concatenate([self._basis, other._basis]))

    def __and__(self, other: "Subspace"):
        return intersect(self, other)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and (self.algebra is other.algebra or self.algebra == other.algebra)
            and self._basis.shape == other._basis.shape
            and bool((self._basis == other._basis).all())
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((id(self.algebra), self._basis.tobytes()))
        return self._hash

    def __repr__(self):
        return f"<Subspace dim {self.dim} of {self.algebra!r}>"

    def quotient_matrix(self):
        """Matrix of the linear quotient map F^d -> F^(d - dim), kernel = self.

        Columns are the reductions of the standard basis vectors modulo this
        subspace, restricted to the non-pivot coordinates.
        """
        d = self.algebra.dim
        m = self.reduce_rows(np.eye(d, dtype=np.int64)).T
        keep = [c for c in range(d) if c not in set(self._pivots)]
        return m[keep, :]


def _pivots_of(arr):
    piv = []
    for row in arr:
        nz = np.nonzero(row)[0]
        piv.append(int(nz[0]))
    return piv


def _same_algebra(u, v):
    if u.algebra is not v.algebra and u.algebra != v.algebra:
        raise ValueError("subspaces belong to different algebras")


def zero_space(a: Algebra) -> Subspace:
    return Subspace(a)


def whole_space(a: Algebra) -> Subspace:
    return Subspace(a, np.eye(a.dim, dtype=np.int64), _canonical=True)


def span(a: Algebra, elements) -> Subspace:
    """Span of elements (AlgebraElements or coordinate rows)."""
    rows = [e.coords if isinstance(e, AlgebraElement) else np.asarray(e) for e in elements]
    if not rows:
        return zero_space(a)
    return Subspace(a, np.stack(rows))


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    return u + v


def intersect(u: Subspace, v: Subspace) -> Subspace:
    """Intersection via the kernel of the stacked bases."""
    _same_algebra(u, v)
    a = u.algebra
    if u.is_zero() or v.is_zero():
        return zero_space(a)
    stacked = np.concatenate([u.basis_array, (-v.basis_array) % a.p]).T  # d x (ru+rv)
    ker = kernels.nullspace(stacked, a.p)
    if ker.shape[0] == 0:
        return zero_space(a)
    alphas = ker[:, : u.dim]
    rows = (alphas @ u.basis_array) % a.p
    return Subspace(a, rows)


def contains(u: Subspace, x: AlgebraElement) -> bool:
    return x in u


def leq(u: Subspace, v: Subspace) -> bool:
    return u <= v


def _pair_rows(g, h):
    """All (g_i, h_j) basis pairs as two aligned row blocks."""
    left = np.repeat(g, h.shape[0], axis=0)
    right = np.tile(h, (g.shape[0], 1))
    return left, right


def bracket_space(g: Subspace, h: Subspace) -> Subspace:
    """Span of the commutators of basis pairs (sufficient by bilinearity)."""
    _same_algebra(g, h)
    a = g.algebra
    if g.is_zero() or h.is_zero():
        return zero_space(a)
    left, right = _pair_rows(g.basis_array, h.basis_array)
    xy = a.batch_mul(left, right)
    yx = a.batch_mul(right, left)
    return Subspace(a, (xy - yx) % a.p)


def product_space(g: Subspace, h: Subspace) -> Subspace:
    """Span of the products of basis pairs."""
    _same_algebra(g, h)
    a = g.algebra
    if g.is_zero() or h.is_zero():
        return zero_space(a)
    left, right = _pair_rows(g.basis_array, h.basis_array)
    return Subspace(a, a.batch_mul(left, right))


def _basis_products(a, rows, side):
    """Products of every algebra basis element with every row (side 'l'/'r')."""
    eye = np.eye(a.dim, dtype=np.int64)
    e, g = _pair_rows(eye, rows)
    return a.batch_mul(e, g) if side == "l" else a.batch_mul(g, e)


def ideal_closure(v: Subspace) -> Subspace:
    """Smallest two-sided ideal containing v, by fixpoint of v + Rv + vR."""
    a = v.algebra
    cur = v
    while True:
        rows = cur.basis_array
        if rows.shape[0] == 0:
            return cur
        lv = _basis_products(a, rows, "l")
        vr = _basis_products(a, rows, "r")
        nxt = Subspace(a, np.concatenate([rows, lv, vr]))
        if nxt.dim == cur.dim:
            return nxt
        cur = nxt


def ideal_closure_direct(v: Subspace) -> Subspace:
    """Oracle: the one-shot formula V + RV + VR + RVR."""
    a = v.algebra
    rows = v.basis_array
    if rows.shape[0] == 0:
        return v
    rv = _basis_products(a, rows, "l")
    vr = _basis_products(a, rows, "r")
    rvr = _basis_products(a, rv, "r")
    return Subspace(a, np.concatenate([rows, rv, vr, rvr]))


def is_full(x: Subspace) -> bool:
    """True iff x generates the algebra as a two-sided ideal."""
    return ideal_closure(x).dim == x.algebra.dim


def is_fully_noncentral(v: Subspace) -> bool:
    """True iff [R, v] is full."""
    return is_full(bracket_space(whole_space(v.algebra), v))


def _commutator_action(a: Algebra):
    """Tensor C with C[j] @ x = coords([e_j, x]); cached per algebra."""
    key = "commutator_action"
    if key not in a._cache:
        t = a.table
        c = (t.transpose(0, 2, 1) - t.transpose(1, 2, 0)) % a.p
        a._cache[key] = _freeze(np.ascontiguousarray(c))
    return a._cache[key]


def center(a: Algebra) -> Subspace:
    """Solution space of [e_j, x] = 0 for all basis e_j."""
    key = "center"
    if key not in a._cache:
        if a.dim == 0:
            a._cache[key] = zero_space(a)
        else:
            c = _commutator_action(a)
            stacked = c.reshape(a.dim * a.dim, a.dim)
            a._cache[key] = Subspace(a, kernels.nullspace(stacked, a.p))
    return a._cache[key]


def t_of(v: Subspace) -> Subspace:
    """The normalizer-style set {x : [R, x] <= v}, as one stacked kernel."""
    a = v.algebra
    if v.dim == a.dim or a.dim == 0:
        return whole_space(a)
    q = v.quotient_matrix()  # (d - dim) x d
    c = _commutator_action(a)
    # rows (j, s): (q @ C[j]) x = 0
    stacked = (np.einsum("sk,jkm->jsm", q, c) % a.p).reshape(-1, a.dim)
    return Subspace(a, kernels.nullspace(stacked, a.p))


def t_of_scan(v: Subspace, budget) -> Subspace:
    """Element-scan oracle for t_of (exhaustive; budget-gated)."""
    a = v.algebra
    rows = a.all_coords(budget)
    c = _commutator_action(a)
    keep = []
    for x in rows:
        br = (c @ x) % a.p  # (d, d): row j = [e_j, x]
        if not v.reduce_rows(br).any():
            keep.append(x)
    return Subspace(a, np.asarray(keep, dtype=np.int64))


@dataclass(frozen=True)
class TowerRecord:
    """Stages of an iterated tower; the last two stages are equal when
    stabilization was observed within the cap."""

    kind: str
    stages: tuple
    stabilized_at: int | None = None

    def dims(self):
        upto = len(self.stages) if self.stabilized_at is None else self.stabilized_at + 1
        return [s.dim for s in self.stages[:upto]]

    def stage(self, n):
        """Stage n, reading past stabilization as the stable value."""
        if n < len(self.stages):
            return self.stages[n]
        if self.stabilized_at is not None:
            return self.stages[-1]
        raise IndexError(f"tower only computed to depth {len(self.stages) - 1}")


def _iterate_tower(kind, v, step, n_max):
    stages = [v]
    stabilized = None
    for n in range(n_max):
        nxt = step(stages[-1])
        stages.append(nxt)
        if nxt == stages[-2]:
            stabilized = n
            break
    return TowerRecord(kind, tuple(stages), stabilized)


def t_tower(v: Subspace, n_max=None) -> TowerRecord:
    """Stages v, T(v), T^2(v), ... up to stabilization or the cap."""
    n_max = v.algebra.dim + 2 if n_max is None else n_max
    if n_max < 1:
        raise ValueError("n_max >= 1 required")
    return _iterate_tower("T-tower", v, t_of, n_max)


def derived_tower(v: Subspace, n_max=None) -> TowerRecord:
    """Stages v, [v,v], [[v,v],[v,v]], ... up to stabilization or the cap."""
    n_max = v.algebra.dim + 2 if n_max is None else n_max
    if n_max < 1:
        raise ValueError("n_max >= 1 required")
    return _iterate_tower("derived-tower", v, lambda s: bracket_space(s, s), n_max)


def is_lie_ideal(v: Subspace) -> bool:
    """[R, v] <= v, checked on basis generators."""
    a = v.algebra
    if v.is_zero() or a.dim == 0:
        return True
    c = _commutator_action(a)
    rows = np.einsum("jkm,gm->jgk", c, v.basis_array).reshape(-1, a.dim) % a.p
    return not v.reduce_rows(rows).any()


def is_rr_submodule(v: Subspace) -> bool:
    """[[R, R], v] <= v, checked on basis generators."""
    a = v.algebra
    comm = commutator_subspace(a)
    return bracket_space(comm, v) <= v


def is_two_sided_ideal(v: Subspace) -> bool:
    a = v.algebra
    if v.is_zero():
        return True
    rows = v.basis_array
    lv = _basis_products(a, rows, "l")
    vr = _basis_products(a, rows, "r")
    return not v.reduce_rows(np.concatenate([lv, vr])).any()


def commutator_subspace(a: Algebra) -> Subspace:
    """[R, R]; cached per algebra."""
    key = "commutator_subspace"
    if key not in a._cache:
        w = whole_space(a)
        a._cache[key] = bracket_space(w, w)
    return a._cache[key]
